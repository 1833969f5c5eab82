"""Independent high-precision reference values, frozen into tests/oracles.json.

Nothing here imports the package. Kernels that cross t = 1 are obtained by
integrating over Z_1 instead of using their closed forms, and joint MGFs
by direct summation / integration over the path states.

    python3 scripts/oracles.py            # rewrite tests/oracles.json
    python3 scripts/oracles.py --check    # compare against the frozen file
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import mpmath as mp

mp.mp.dps = 25
OUT = Path(__file__).resolve().parents[1] / "tests" / "oracles.json"


def nb_pmf(r, p, k):
    return mp.gamma(k + r) / (mp.gamma(r) * mp.factorial(k)) * p**r * (1 - p) ** k


def gamma_pdf(shape, scale, x):
    return x ** (shape - 1) * mp.e ** (-x / scale) / (mp.gamma(shape) * scale**shape)


def poisson_pmf(lam, k):
    return mp.e ** (-lam) * lam**k / mp.factorial(k)


def marginal_pmf(theta, t, k):
    r0 = 1 / mp.mpf(theta) ** 2
    p = (1 - t) if t < 1 else (1 - 1 / mp.mpf(t))
    return nb_pmf(r0, p, k)


def cross_mass(theta, s, t, i, j):
    """P(Z_t = j | Z_s = i), s < 1 < t, by integrating over Z_1."""
    r0 = 1 / mp.mpf(theta) ** 2
    f = lambda y: gamma_pdf(i + r0, 1 - mp.mpf(s), y) * poisson_pmf(y / (mp.mpf(t) - 1), j)  # noqa: E731
    return quad_z1(f, i + r0)


def quad_z1(f, shape):
    """Integral of f over (0, inf) where f ~ y^(shape - 1) at 0; y = x^m removes the singularity."""
    m = max(mp.mpf(1), 1 / mp.mpf(shape))
    return mp.quad(lambda x: f(x**m) * m * x ** (m - 1), [0, 1, 2, 4, mp.inf])


def x_affine(theta, t):
    th = mp.mpf(theta)
    if t < 1:
        return th * (1 - t), -mp.mpf(t) / th
    if t == 1:
        return th, -1 / th
    return th * (t - 1), -1 / th


def series(f, start=0, tol=mp.mpf(10) ** -24, min_terms=30):
    total, k = mp.mpf(0), start
    while True:
        term = f(k)
        total += term
        if k - start > min_terms and abs(term) < tol * abs(total):
            return total
        k += 1


def joint_mgf_path(theta, times, u):
    """E exp(sum u_j X_{t_j}) for birth times < 1 then optional 1, then death times.

    Supported layouts: (s,), (s, t) with s < 1 < t, (s, 1, t), (s, 1, t1, t2).
    """
    r0 = 1 / mp.mpf(theta) ** 2
    s = times[0]
    a0, b0 = x_affine(theta, s)

    rest = list(zip(times[1:], u[1:]))
    if not rest:
        return mp.e ** (u[0] * b0) * series(lambda z: marginal_pmf(theta, s, z) * mp.e ** (u[0] * a0 * z))
    at_one = rest.pop(0)[1] if rest[0][0] == 1 else None
    deaths = rest

    def given_z1(y):
        val = mp.mpf(1)
        if at_one is not None:
            a, b = x_affine(theta, 1)
            val *= mp.e ** (at_one * (a * y + b))
        if not deaths:
            return val
        (t1, v1), *more = deaths
        a1, b1 = x_affine(theta, t1)
        lam = y / (mp.mpf(t1) - 1)
        if not more:
            return val * mp.e ** (v1 * b1) * mp.e ** (lam * (mp.e ** (v1 * a1) - 1))
        (t2, v2), = more
        a2, b2 = x_affine(theta, t2)
        p = (mp.mpf(t1) - 1) / (mp.mpf(t2) - 1)
        # sum_k P(Z_t1 = k) e^{v1 a1 k} E[e^{v2 a2 Z_t2} | Z_t1 = k], Z_t2 | k thinned binomially
        g = mp.e ** (v1 * a1) * (1 - p + p * mp.e ** (v2 * a2))
        return val * mp.e ** (v1 * b1 + v2 * b2) * mp.e ** (lam * (g - 1))

    def joint_density(y):
        # sum_z P(Z_s = z) e^{u_1 a z} Gamma(z + r0, 1 - s)(y); the z-sum is an exponential series
        sig = 1 - mp.mpf(s)
        w = mp.mpf(s) * mp.e ** (u[0] * a0) / sig
        return marginal_pmf(theta, s, 0) * gamma_pdf(r0, sig, y) * mp.e ** (w * y)

    return mp.e ** (u[0] * b0) * quad_z1(lambda y: joint_density(y) * given_z1(y), r0)


def fourth_moment(theta, t):
    a, b = x_affine(theta, t)
    if t == 1:
        r0 = 1 / mp.mpf(theta) ** 2
        return quad_z1(lambda y: gamma_pdf(r0, 1, y) * (a * y + b) ** 4, r0)
    return series(lambda z: marginal_pmf(theta, t, z) * (a * z + b) ** 4)


def survival_integral(theta, k):
    r0 = 1 / mp.mpf(theta) ** 2
    return mp.quad(lambda t: 1 - (1 - 1 / t) ** r0, [1, 2, mp.e**k])


def build() -> dict:
    f = lambda x: float(x)  # noqa: E731
    out = {}
    out["poisson_log_mass_3.7_50"] = f(-mp.mpf("3.7") + 50 * mp.log(mp.mpf("3.7")) - mp.loggamma(51))
    out["nb_mgf_0.25_0.4_0.3"] = f(series(lambda k: mp.e ** (mp.mpf("0.3") * k) * nb_pmf(mp.mpf("0.25"), mp.mpf("0.4"), k)))
    out["cross_mass"] = [
        {"theta": th, "s": s, "t": t, "i": i, "j": j, "mass": f(cross_mass(th, mp.mpf(s), mp.mpf(t), i, j))}
        for th, s, t, i, j in [(1.0, 0.5, 3.0, 1, 2), (2.0, 0.3, 4.0, 0, 2), (0.5, 0.1, 1.5, 3, 0), (0.5, 0.9, 2.5, 7, 5)]
    ]
    mgf_cases = [
        (1.0, (0.5,), (0.1,)),
        (1.0, (0.5, 2.0), (0.1, 0.2)),
        (0.5, (0.3, 1.0, 2.0), (0.2, -0.3, 0.1)),
        (2.0, (0.5, 1.0, 2.0, 3.0), (-0.5, 0.1, 0.3, -0.1)),
        (0.7, (0.25, 1.5, 4.0), (0.3, -0.2, 0.1)),
    ]
    out["joint_mgf"] = [
        {"theta": th, "times": list(ts), "u": list(us),
         "value": f(joint_mgf_path(th, [mp.mpf(x) for x in ts], [mp.mpf(x) for x in us]))}
        for th, ts, us in mgf_cases
    ]
    out["fourth_moment"] = [
        {"theta": th, "t": t, "value": f(fourth_moment(th, mp.mpf(t)))}
        for th in (0.5, 1.0, 2.0) for t in (0.5, 1.0, 2.0)
    ]
    out["survival_integral"] = [
        {"theta": th, "k": k, "value": f(survival_integral(th, k))} for th in (0.5, 1.0, 2.0) for k in (2, 5, 8)
    ]
    return out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--check", action="store_true")
    args = ap.parse_args()
    data = build()
    if args.check:
        frozen = json.loads(OUT.read_text())
        ok = json.dumps(frozen, sort_keys=True) == json.dumps(data, sort_keys=True)
        print("oracles match" if ok else "oracles differ")
        return 0 if ok else 1
    OUT.write_text(json.dumps(data, indent=1) + "\n")
    print(f"wrote {OUT}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
