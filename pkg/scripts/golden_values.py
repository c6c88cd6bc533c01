"""Brute-force oracle for the frozen values in tests/golden.json.

Deliberately imports nothing from ``sysrisk``: every number below comes from
adaptive quadrature (scipy.integrate.quad / dblquad) or mpmath at 50 digits,
applied to the model parameters written out by hand. Re-run with

    python scripts/golden_values.py > tests/golden.json
"""

import json
import math

import mpmath as mp
from scipy import integrate

mp.mp.dps = 50

ALPHA = 1.2
DELTA = 0.4
T = 1.0
# (gamma, intensity) per claim stream: line1.x, line1.y, line2.x, line2.y
STREAMS = [(2.0, 0.4), (4.0, 0.7), (3.0, 0.5), (4.0, 0.7)]
LINES = [(0, 1), (2, 3)]
REF_GAMMA = 2.0
PHI = -ALPHA * DELTA


def pareto_tail(gamma, x):
    return mp.power(mp.mpf(gamma) / (mp.mpf(gamma) + x), ALPHA)


def exposure(lam, phi=PHI, t=T):
    # dlambda_s = lam ds for a homogeneous Poisson stream
    val, _ = integrate.quad(lambda s: lam * math.exp(phi * s), 0.0, t, epsabs=0, epsrel=1e-13)
    return val


def ratio_limit(gamma):
    # lim_{x->inf} tail(gamma, x) / tail(REF_GAMMA, x), evaluated at a huge x in mpmath
    x = mp.mpf(10) ** 30
    return float(pareto_tail(gamma, x) / pareto_tail(REF_GAMMA, x))


def line_weights(t=T):
    out = []
    for idx in LINES:
        out.append(sum(ratio_limit(STREAMS[i][0]) * exposure(STREAMS[i][1], t=t) for i in idx))
    return out


def ref_quantile(q):
    # solve tail(REF_GAMMA, x) = 1 - q by bisection-free root finding in mpmath
    return float(mp.findroot(lambda x: pareto_tail(REF_GAMMA, x) - (1 - mp.mpf(q)), 50))


def main():
    golden = {}
    golden["tail_gamma2_x50"] = float(pareto_tail(2.0, mp.mpf(50)))
    golden["quantile_gamma2_q099"] = ref_quantile("0.99")
    golden["exposure_lam04_phi048"] = exposure(0.4)
    golden["ratio_4_vs_2"] = ratio_limit(4.0)

    xs = [50.0, 500.0, 5000.0, 50000.0]
    golden["table1_x"] = xs
    golden["table1_theory"] = [
        sum(float(pareto_tail(g, mp.mpf(x))) * exposure(lam) for g, lam in STREAMS) for x in xs
    ]

    l = line_weights()
    total = sum(l)
    golden["line_weights"] = l
    golden["total_weight"] = total
    golden["shares"] = [w / total for w in l]

    golden["var_q099"] = total ** (1 / ALPHA) * ref_quantile("0.99")
    golden["line_tail_k0_x5000"] = l[0] * float(pareto_tail(REF_GAMMA, mp.mpf(5000)))

    qs = [round(0.99 + 0.001 * i, 4) for i in range(10)]
    golden["q_grid"] = qs
    ses, mes = [], []
    for lk in l:
        ses.append([
            lk / total * (total ** (1 / ALPHA) - lk ** (1 / ALPHA) + total ** (1 / ALPHA) / (ALPHA - 1))
            * ref_quantile(str(q)) for q in qs
        ])
        mes.append([ALPHA / (ALPHA - 1) * lk / total ** (1 - 1 / ALPHA) * ref_quantile(str(q)) for q in qs])
    golden["ses"] = ses
    golden["mes"] = mes
    golden["ses_k0_q0995"] = ses[0][qs.index(0.995)]

    # Spearman's rho of the bivariate Frank copula, theta = 5
    theta = 5.0

    def frank_cdf(u, v):
        num = math.expm1(-theta * u) * math.expm1(-theta * v)
        return -math.log1p(num / math.expm1(-theta)) / theta

    integral, _ = integrate.dblquad(lambda v, u: frank_cdf(u, v), 0, 1, 0, 1, epsabs=1e-13, epsrel=1e-12)
    golden["frank_spearman_theta5"] = 12 * integral - 3

    p = 0.5
    golden["logseries_mean_p05"] = -p / ((1 - p) * math.log(1 - p))

    # first moment of S_t: sum over streams of lam * E[claim] * int_0^t e^{-delta s} ds
    golden["mean_s_t"] = sum(lam * g / (ALPHA - 1) * exposure(1.0, phi=-DELTA) for g, lam in STREAMS)
    golden["premium_integral_linear"] = exposure(1.0, phi=-DELTA)

    print(json.dumps(golden, indent=2))


if __name__ == "__main__":
    main()
