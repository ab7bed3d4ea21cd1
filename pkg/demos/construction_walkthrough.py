"""
Digit blocks, stage masses and the two branches
===============================================

A = {f even} and B = {f odd}, where f(x) is the last stage whose block of
binary digits is all zeros.  At depth 26 the default parameters keep two
stages.  Runs in under a minute and needs about 2.5 GB of memory.
"""

import numpy as np

from fdlab import construction, energy

spec = construction.default_spec()
print("spec:", spec.to_dict())
counts = construction.stage_counts(spec)
print("cells per stage:", counts.tolist(), "of", 1 << spec.working_depth)

for k in range(1, spec.K + 1):
    rep = construction.mass_of_f_infinite_bound(spec, k)
    print(f"lambda(f >= {k}) = {rep.exact_mass} <= {rep.union_bound}")

mu = construction.candidate_measure(spec, "lebesgue-A")
masses = construction.stage_masses(mu, spec, exact=True)
for k, j, a, thr, in_p in masses.rows():
    print(f"alpha_{k}^{j} = {float(a):.6f}  threshold {float(thr):.6f}  k in P: {in_p}")

en = energy.riesz_energy(mu, spec.s)
print(f"I_{spec.s}(mu) = {en.value:.4f} ({en.method})")
for v in construction.dichotomy(mu, spec, masses=masses, energy=en):
    if v.witness is not None:
        w = v.witness
        print(f"stage {v.k}: witness at r={w.r_star}, |nu_hat| = {w.nu_sup:.4f} "
              f">= {w.required:.4f}; combined bound {w.combined_bound:.4f} (exponent {w.exponent:.2f})")
    else:
        print(f"stage {v.k}: energy branch, bound {v.trigger.bound:.4g}")
