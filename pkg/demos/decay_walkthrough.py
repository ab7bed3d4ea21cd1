"""
Reading Fourier decay off band maxima
=====================================

Each dyadic band [2**t, 2**(t+1)) contributes its largest |mu_hat|; a
least-squares line through the log maxima gives the decay exponent beta
and the estimate min(1, 2 beta).
"""

from fdlab import fourier, measures

for name, mu, offset in [
    ("Cantor", measures.CantorMeasure(12), 0.0),
    ("Lebesgue, half-integers", measures.lebesgue(0), 0.5),
    ("Lebesgue, integers", measures.lebesgue(12), 0.0),
]:
    rep = fourier.estimate_decay(mu, 1 << 14, offset=offset)
    print(f"{name:<26} beta = {rep.fitted_exponent:.4f}  estimate {rep.fourier_dim_estimate:.4f}")

rep = fourier.estimate_decay(measures.CantorMeasure(12), 1 << 10)
print()
print(rep.to_csv())

# The digit-block candidates need depth-26 transforms; see `lab decay
# --builtin construction-A` and `--builtin construction-AuB`.
