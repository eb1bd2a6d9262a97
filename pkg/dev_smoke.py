"""Dev-only accuracy sweep of specfun against mpmath. Not shipped."""
import mpmath as mp

from vstates import specfun as sf

mp.mp.dps = 40

# --- gamma ---
worst = (0.0, None)
xs = [1e-3, 0.1, 0.5, 1.0, 1.5, 2.0, 4.7, 9.25, 20.0, 99.25, 171.3,
      -0.5, -1.5, -6.3, 0.45, 0.55, 0.225, 0.775]
for x in xs:
    got = sf.gamma(x)
    ref = float(mp.gamma(x))
    rel = abs(got - ref) / abs(ref)
    if rel > worst[0]:
        worst = (rel, x)
print("gamma worst rel %.3e at x=%s" % worst)

# --- hyp2f1 across routes ---
cases = [
    (0.25, 1.25, 2.0, 0.3),    # series route
    (0.45, 4.45, 5.0, 0.9801), # Euler route, stress
    (0.45, 4.45, 5.0, 0.81),
    (0.25, 8.25, 9.0, 0.64),
    (0.45, 0.95, 1.0, 0.36),
    (0.25, 0.5, 2.0, 1.0),     # Gauss point
    (0.9, 2.0, 1.5, 0.7),      # c < b: swapped/fallback
    (2.6, 2.9, 1.2, 0.6),      # c below both: series fallback
    (0.45, 1.45, 3.0, 0.99),
    (0.05, 1.05, 2.0, 0.9975),
]
worst = (0.0, None)
for a, b, c, z in cases:
    got = sf.hyp2f1(a, b, c, z)
    ref = float(mp.hyp2f1(a, b, c, z))
    rel = abs(got - ref) / abs(ref)
    if rel > worst[0]:
        worst = (rel, (a, b, c, z))
    print("  2f1(%.4g,%.4g;%.4g;%.6g) rel %.3e" % (a, b, c, z, rel))
print("hyp2f1 worst rel %.3e at %s" % worst)


def lam_ref(n, b, alpha):
    h = mp.mpf(alpha) / 2
    ca = mp.gamma(h) / (mp.mpf(2) ** (1 - alpha) * mp.gamma(1 - h))
    return float(ca * mp.rf(h, n) / mp.factorial(n) * mp.mpf(b) ** (n - 1)
                 * mp.hyp2f1(h, n + h, n + 1, mp.mpf(b) ** 2))


def theta_ref(n, alpha):
    al = mp.mpf(alpha)
    pref = mp.gamma(1 - al) / (mp.mpf(2) ** (1 - al) * mp.gamma(1 - al / 2) ** 2)
    r1 = mp.gamma(1 + al / 2) / mp.gamma(2 - al / 2)
    rn = mp.gamma(n + al / 2) / mp.gamma(n + 1 - al / 2)
    return float(pref * (r1 - rn))


worst = (0.0, None)
for n in (1, 2, 3, 5, 8, 12, 30):
    for b in (0.05, 0.2, 0.5, 0.8, 0.9, 0.99):
        for alpha in (0.05, 0.3, 0.5, 0.7, 0.9, 0.99):
            got = sf.lambda_n(n, b, alpha)
            ref = lam_ref(n, b, alpha)
            rel = abs(got - ref) / abs(ref)
            if rel > worst[0]:
                worst = (rel, (n, b, alpha))
print("lambda_n worst rel %.3e at %s" % worst)

worst = (0.0, None)
for n in (2, 3, 5, 8, 12, 30):
    for alpha in (0.05, 0.3, 0.5, 0.7, 0.9, 0.99):
        got = sf.theta_n(n, alpha)
        ref = theta_ref(n, alpha)
        rel = abs(got - ref) / abs(ref)
        if rel > worst[0]:
            worst = (rel, (n, alpha))
print("theta_n worst rel %.3e at %s" % worst)
print("theta_1 exact zero:", sf.theta_n(1, 0.5) == 0.0)

# Lambda_1 at b=1 (closed form inside lambda_n via z=1 Gauss route)
for alpha in (0.1, 0.5, 0.9):
    got = sf.lambda_n(1, 1.0, alpha)
    al = mp.mpf(alpha)
    ref = float(mp.gamma(1 - al) * mp.gamma(1 + al / 2)
                / (mp.mpf(2) ** (1 - al) * mp.gamma(1 - al / 2) ** 2
                   * mp.gamma(2 - al / 2)))
    print("lambda_1(1) alpha=%.2g rel %.3e" % (alpha, abs(got - ref) / abs(ref)))
