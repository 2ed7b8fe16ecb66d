"""Independent reference implementations and frozen reference values.

Nothing here imports the package. Formulas are retyped from the model
equations; roots come from plain bisection; derivatives from central
differences; trajectories from scipy's DOP853.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.integrate import solve_ivp


def bisect(f, a: float, b: float, iters: int = 200) -> float:
    fa = f(a)
    for _ in range(iters):
        m = 0.5 * (a + b)
        fm = f(m)
        if fm == 0:
            return m
        if (fm < 0) == (fa < 0):
            a, fa = m, fm
        else:
            b = m
    return 0.5 * (a + b)


def central_gradient(h, theta: float, w: float, step: float = 1e-5) -> tuple[float, float]:
    dth = (h(theta + step, w) - h(theta - step, w)) / (2 * step)
    dw = (h(theta, w + step) - h(theta, w - step)) / (2 * step)
    return dth, dw


# same sign


def H_same(t, w, alpha, beta, d):
    s, c = math.sin(t), math.cos(t)
    rb = math.sqrt(beta)
    gap = rb * s - c
    log_term = beta**1.5 * math.log((1 - s) / (1 + s)) + math.log((1 - c) / (1 + c))
    return log_term / (2 * d) - alpha * rb / math.sqrt(d * d / beta * gap * gap + w * w)


def F_same(t, w, alpha, beta, d):
    s, c = math.sin(t), math.cos(t)
    rb = math.sqrt(beta)
    gap = rb * s - c
    q = d * d / beta * gap * gap + w * w
    f1 = alpha * rb * w / q**1.5
    f2 = (beta * rb * s - c) / (d * s * c) - alpha * d * d * (s + rb * c) * gap / (rb * q**1.5)
    return f1, f2


def same_equilibria(alpha, beta, d=1.0):
    cubic = lambda y: beta * y**3 - (2 * beta + 1) * y**2 + (beta + 2) * y - 1 + alpha * (y * y + beta * y)  # noqa: E731
    ys = bisect(cubic, 0.0, 1.0)
    ts = math.atan(ys / math.sqrt(beta))
    tb = math.atan(1 / math.sqrt(beta))
    t2 = bisect(lambda t: F_same(t, 0.0, alpha, beta, d)[1], tb + 1e-9, math.pi / 2 - 1e-9)
    return ys, ts, tb, t2


# opposite sign


def G_opp(t, w, alpha, gamma, d):
    rg = math.sqrt(gamma)
    gap = math.cosh(t) - rg * math.sinh(t)
    pot = (2 * gamma**1.5 * math.atan(math.tanh(t / 2)) + math.log(math.tanh(t / 2))) / math.sqrt(d)
    return pot + alpha * rg / math.sqrt(d / gamma * gap * gap + w * w)


def F_opp(t, w, alpha, gamma, d):
    ch, sh = math.cosh(t), math.sinh(t)
    rg = math.sqrt(gamma)
    gap = ch - rg * sh
    q = d / gamma * gap * gap + w * w
    g1 = -alpha * rg * w / q**1.5
    g2 = -(gamma * rg / ch + 1 / sh) / math.sqrt(d) + alpha * d * (sh - rg * ch) * gap / (rg * q**1.5)
    return g1, g2


def quartic_corrected(eta, alpha):
    return eta**4 - eta**3 - alpha * eta**2 + eta - 1


def quartic_triple_cubic_term(eta, alpha):
    # variant with -3 eta^3; it does not follow from the equilibrium cubic
    return eta**4 - 3 * eta**3 - alpha * eta**2 + eta - 1


def scan_axis_zeros(alpha, gamma, d=1.0, hi=20.0, n=20000):
    """Sign changes of G2(theta, 0) on (theta_gamma, hi), by brute-force sampling."""
    tg = math.atanh(1 / math.sqrt(gamma))
    xs = np.linspace(tg + 1e-6, hi, n)
    vals = np.array([F_opp(x, 0.0, alpha, gamma, d)[1] for x in xs])
    idx = np.nonzero(np.sign(vals[:-1]) != np.sign(vals[1:]))[0]
    return [bisect(lambda t: F_opp(t, 0.0, alpha, gamma, d)[1], xs[i], xs[i + 1]) for i in idx]


# coaxial physical field


def rz_field(r1, z1, r2, z2, alpha, beta):
    dr, w = r1 - r2, z1 - z2
    den = (dr * dr + w * w) ** 1.5
    return (
        -alpha * r2 * w / den,
        beta / r1 + alpha * r2 * dr / den,
        alpha * beta * r1 * w / den,
        1 / r2 - alpha * beta * r1 * dr / den,
    )


def dop853(fun, y0, t_end, rtol=1e-12, atol=1e-14, t_eval=None):
    sol = solve_ivp(fun, (0.0, t_end), y0, method="DOP853", rtol=rtol, atol=atol, t_eval=t_eval, dense_output=True)
    assert sol.status == 0, sol.message
    return sol


# frozen values (alpha = 0.1, d = 1), produced by the bisection routines above
FROZEN_SAME = {
    1: dict(y_star=0.5572668190675993, theta_star=0.5084052179741737, theta_star2=1.062391108820723,
            h_star=-2.138164738935355),
    2: dict(y_star=0.3813563880026146, theta_star=0.2633946183840798, theta_star2=0.818871615138568,
            h_star=-4.035569868038605),
    4: dict(y_star=0.21361277387951733, theta_star=0.10640300930521662, theta_star2=0.6125464293134584,
            h_star=-7.59626819710247),
}
H_SAME_PI4_W1 = -1.862747174039086
GAMMA_STAR_CORRECTED = 1.1048512364202516
GAMMA_STAR_TRIPLE_CUBIC_TERM = 8.750706214177226
FROZEN_OPP = {
    2: dict(theta_star=1.1806321585213926, threshold=2.781259087448454, theta_bar=0.7700792443373379),
    16: dict(theta_star=0.336136117894835, threshold=24.43809358717736, theta_bar=0.2224209098234089),
}
ESCAPE_LEVEL_G2 = 4.442882938158366
ROTATION_PERIOD = 2 * math.pi / 0.025
