"""Geometry behind the one-bit channel, measured empirically.

Three short experiments: the sign-flip probability of a Gaussian
hyperplane equals angle/pi; the mean width of the s-sparse unit ball
grows like sqrt(s log(n/s)); and the direction-error inequality
lhs <= delta + separating-fraction holds across perturbed estimates.
"""

import math

import numpy as np

import hybridcs as h

rng = np.random.default_rng(np.random.SeedSequence(7))

print("sign flips vs angle (10^4 Gaussian rows each)")
for deg in (15, 45, 90, 150):
    theta = math.radians(deg)
    x = np.array([1.0, 0.0])
    y = np.array([math.cos(theta), math.sin(theta)])
    rate = h.sign_flip_rate(x, y, 10_000, rng)
    print(f"  angle {deg:3d} deg: measured {rate:.4f}  predicted {theta / math.pi:.4f}")

print("\nmean width of the s-sparse unit ball (n = 256)")
for s in (1, 4, 16, 64, 256):
    est = h.gaussian_mean_width_sparse(256, s, 4000, rng)
    guide = math.sqrt(s * math.log(256 / s)) if s < 256 else math.sqrt(256)
    print(f"  s = {s:3d}: width {est.value:7.3f}  sqrt(s log(n/s)) = {guide:7.3f}")

print("\ndirection-error inequality, n=128, s=4, m_o=2048, delta=0.5")
n, s, m_o, delta = 128, 4, 2048, 0.5
holds = 0
worst_margin = math.inf
for _ in range(100):
    x = h.gen_sparse_signal(n, s, rng)
    norm_x = float(np.linalg.norm(x.values))
    u = rng.standard_normal(n)
    u *= 1e-3 * norm_x / np.linalg.norm(u)
    bump = np.zeros(n)
    bump[x.support] = rng.standard_normal(s)
    bump *= rng.uniform(0.1, 0.8) * norm_x / np.linalg.norm(bump)
    x_hat = h.Signal(values=x.values + bump, s=s, support=x.support)
    a_o = h.gen_gaussian_matrix(m_o, n, rng)
    rep = h.direction_error_check(x, u, x_hat, a_o, delta)
    holds += rep.holds
    worst_margin = min(worst_margin, rep.rhs - rep.lhs)
print(f"  holds in {holds}/100 trials, minimum rhs - lhs margin {worst_margin:.4f}")
