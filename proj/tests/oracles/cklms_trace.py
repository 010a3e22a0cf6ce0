"""Independent high-precision trace of kernel LMS with novelty gating.

Prints the values frozen in tests/unit/test_filters.cpp. Uses mpmath at
50 digits and shares no code with the C++ library.
"""
import mpmath as mp

mp.mp.dps = 50


def kappa(z, w, sigma):
    return mp.exp(-sum((a - mp.conj(b)) ** 2 for a, b in zip(z, w)) / sigma ** 2)


def run(samples, sigma, mu, d1, d2):
    centers, coeffs, out = [], [], []
    for z, d in samples:
        pred = sum((a * kappa(z, c, sigma) for a, c in zip(coeffs, centers)), mp.mpc(0))
        e = d - pred
        if not centers:
            admit = True
        else:
            dist2 = min(
                max(mp.re(kappa(z, z, sigma) + kappa(c, c, sigma) - 2 * mp.re(kappa(c, z, sigma))), 0)
                for c in centers
            )
            admit = not (mp.sqrt(dist2) < d1) and not (abs(e) < d2)
        if admit:
            centers.append(z)
            coeffs.append(mu * e)
        out.append((pred, e, admit, len(centers)))
    return out, coeffs


z1 = [mp.mpc(0.3, 0.2), mp.mpc(-0.1, 0.4)]
z2 = [mp.mpc(0.31, 0.2), mp.mpc(-0.1, 0.41)]
z3 = [mp.mpc(-0.7, 0.1), mp.mpc(0.9, -0.3)]
z4 = [mp.mpc(1.5, -0.4), mp.mpc(-1.2, 0.6)]
samples = [(z1, mp.mpc(0.5, -0.2)), (z2, mp.mpc(0.45, -0.1)), (z3, mp.mpc(-0.3, 0.8))]
sigma, mu, d1, d2 = mp.mpf(1), mp.mpf("0.5"), mp.mpf("0.1"), mp.mpf("0.01")
trace, _ = run(samples, sigma, mu, d1, d2)
# fourth sample: far from every center, desired = prediction + 0.004 so that |e| < delta2
centers = [z1, z3]
coeffs = [mu * trace[0][1], mu * trace[2][1]]
p4 = sum(a * kappa(z4, c, sigma) for a, c in zip(coeffs, centers))
d4 = mp.mpc(mp.nstr(mp.re(p4) + mp.mpf("0.004"), 17), mp.nstr(mp.im(p4), 17))
samples.append((z4, d4))
trace, coeffs = run(samples, sigma, mu, d1, d2)
print("d4 =", mp.nstr(mp.re(d4), 17), mp.nstr(mp.im(d4), 17))
for n, (p, e, a, s) in enumerate(trace):
    print(n, mp.nstr(mp.re(p), 17), mp.nstr(mp.im(p), 17), mp.nstr(mp.re(e), 17), mp.nstr(mp.im(e), 17), a, s)
for a in coeffs:
    print("coef", mp.nstr(mp.re(a), 17), mp.nstr(mp.im(a), 17))
