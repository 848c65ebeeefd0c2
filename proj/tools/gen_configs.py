# Copyright 2026 The fmnet Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
# http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Regenerates the bundled experiment configs under configs/."""
import json, os
out = os.path.join(os.path.dirname(os.path.abspath(__file__)), '..', 'configs')
FM_ROUTINGS = ["omniwar", "tera(service=hyperx(d=3))", "tera(service=hyperx(d=2))", "valiant", "ugal", "ordering(srinr)"]
LOADS = [0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9,1.0]
def fm(n): return {"kind":"complete","switches":n,"servers_per_switch":n}
CI = {"topology": fm(16), "cycles": {"warmup": 2500, "measure": 7500}, "seeds": [1]}
def write(name, desc, base, ci=None, full=None):
    cfg = {"name": name, "description": desc}
    cfg.update(base)
    cfg["profiles"] = {"ci": ci if ci is not None else CI, "full": full if full is not None else {}}
    with open(os.path.join(out, name + '.json'), 'w') as f:
        json.dump(cfg, f, indent=2); f.write('\n')

full_fm64 = {"topology": fm(64), "seeds": [1,2,3], "cycles": {"warmup": -1, "measure": 80000, "max": 100000000}}

# Bernoulli sweeps on FM_64
for pat in ["uniform", "rsp"]:
    write(f"bernoulli_{pat}_fm64", f"Accepted load, latency, Jain and hops versus offered load under {pat} traffic",
          {"topology": fm(64), "routings": FM_ROUTINGS,
           "traffic": {"mode": "bernoulli", "pattern": pat, "loads": LOADS},
           "cycles": {"measure": 80000}, "seeds": [1, 2, 3]})

# Link-ordering time-to-finish bars: fixed generation, 1250 packets per server
for pat in ["shift", "complement", "rsp"]:
    write(f"ttf_link_ordering_{pat}", f"Cycles to deliver a fixed burst under {pat} traffic, link ordering against VC baselines",
          {"topology": fm(64), "routings": ["ordering(srinr)", "ugal", "valiant"],
           "traffic": {"mode": "fixed_burst", "pattern": pat, "packets_per_server": 1250},
           "seeds": [1, 2, 3]},
          ci={"topology": fm(16), "traffic": {"packets_per_server": 100}, "seeds": [1]})

# sRINR extremes at saturation
for pat in ["shift", "complement"]:
    write(f"srinr_saturation_{pat}", f"sRINR saturation throughput under {pat} traffic",
          {"topology": fm(64), "routings": ["ordering(srinr)"],
           "traffic": {"mode": "bernoulli", "pattern": pat, "loads": [1.0]},
           "cycles": {"measure": 80000}, "seeds": [1]})

# Service topology comparison, fixed burst
SERVICES = ["tera(service=path)", "tera(service=hyperx(d=2))", "tera(service=hyperx(d=3))", "tera(service=k_tree(4))", "valiant", "ugal"]
for pat in ["rsp", "fixed_random"]:
    write(f"service_topologies_{pat}", f"TERA service topologies under {pat} traffic, fixed burst",
          {"topology": fm(64), "routings": SERVICES,
           "traffic": {"mode": "fixed_burst", "pattern": pat, "packets_per_server": 1250},
           "seeds": [1, 2, 3]},
          ci={"topology": fm(16), "traffic": {"packets_per_server": 100}, "seeds": [1]})

# Kernels on FM_64
KERNEL_ROUTINGS = ["omniwar", "ugal", "ordering(srinr)", "tera(service=hyperx(d=2))", "tera(service=hyperx(d=3))"]
KOPTS = {"all2all": {"message_packets": 1},
         "stencil2d": {"message_packets": 4, "iterations": 10},
         "stencil3d": {"message_packets": 4, "iterations": 10},
         "fft3d": {"message_packets": 4},
         "allreduce": {"allreduce_base_packets": 256}}
for k, opts in KOPTS.items():
    for mapping in ["linear", "random"]:
        t = {"mode": "kernel", "kernel": k, "mapping": mapping}
        t.update(opts)
        write(f"kernel_{k}_{mapping}_fm64", f"Cycles to finish {k} with {mapping} process mapping on FM_64",
              {"topology": fm(64), "routings": KERNEL_ROUTINGS, "traffic": t, "seeds": [1, 2, 3]},
              ci={"topology": fm(16), "seeds": [1]})

# 2D HyperX 8x8 with FM_8 rows and columns
hx = {"kind": "hyperx", "dims": [8, 8], "servers_per_switch": 8}
HX_ROUTINGS = ["hyperx_tera(order=o1turn)", "hyperx_tera(order=dor)"]
for k, opts in {"all2all": {"message_packets": 1, "overlap": True}, "allreduce": {"allreduce_base_packets": 256}}.items():
    for mapping in ["linear", "random"]:
        t = {"mode": "kernel", "kernel": k, "mapping": mapping}
        t.update(opts)
        write(f"hyperx8x8_{k}_{mapping}", f"Cycles to finish {k} with {mapping} mapping on an 8x8 HyperX of FM_8 rows and columns",
              {"topology": hx, "routings": HX_ROUTINGS, "traffic": t, "seeds": [1, 2, 3]},
              ci={"topology": {"kind": "hyperx", "dims": [4, 4], "servers_per_switch": 4}, "seeds": [1]})

est = {"name": "estimate_services", "description": "Estimated TERA throughput under switch permutations per service topology",
       "services": ["path", "k_tree(4)", "d_mesh(d=2)", "hypercube", "hyperx(d=2)", "hyperx(d=3)"],
       "switches": [16, 32, 64, 128, 256, 512, 1024],
       "profiles": {"ci": {"switches": [16, 64]}, "full": {}}}
with open(os.path.join(out, 'estimate_services.json'), 'w') as f:
    json.dump(est, f, indent=2); f.write('\n')
