"""Shared helpers for the mpmath oracle scripts."""
import os

import mpmath as mp

mp.mp.dps = 40

HERE = os.path.dirname(os.path.abspath(__file__))
FROZEN = os.path.join(os.path.dirname(HERE), "frozen")


def num(v):
    s = mp.nstr(mp.mpf(v), 20, strip_zeros=False)
    if "e" not in s and "." not in s:
        s += ".0"
    return s


def cnum(v):
    v = mp.mpc(v)
    return "{%s, %s}" % (num(v.real), num(v.imag))


def write_inc(name, script, body):
    os.makedirs(FROZEN, exist_ok=True)
    path = os.path.join(FROZEN, name)
    with open(path, "w") as f:
        f.write("// Generated by tests/oracles/%s. Do not edit.\n" % script)
        f.write(body)
    print("wrote", path)


# Fourier symbols for ξ > 0; values at ξ < 0 are the complex conjugates.
def symbol(op, alpha, gamma, xi):
    a = mp.mpf(alpha)
    if op == "WeylRight" or op == "DxWeylRight":
        return xi ** a * mp.expjpi(a / 2)
    if op == "WeylLeftNeg":
        return -(xi ** a) * mp.expjpi(-a / 2)
    if op == "DxWeylLeftNeg":
        return xi ** a * mp.expjpi(-a / 2)
    if op == "RieszFeller":
        return -(xi ** a) * mp.expjpi(-mp.mpf(gamma) / 2)
    if op == "FracLaplacian":
        return xi ** a
    raise ValueError(op)


def fourier_apply(op, alpha, gamma, x, xi_uhat):
    """op[u](x) for real u with û(ξ) = xi_uhat(ξ)/ξ on ξ > 0 (conjugate
    symmetric). The ξ^{α-1} endpoint behaviour on [0, 1] is removed by
    ξ = t^{1/α}."""
    a = mp.mpf(alpha)
    x = mp.mpf(x)
    h = lambda xi: symbol(op, a, gamma, mp.mpf(1)) * xi_uhat(xi) * mp.expj(xi * x)
    head = mp.quad(lambda t: h(t ** (1 / a)) / a, [0, 1])
    pts = [1] + [1 + k * mp.pi / max(abs(x), 1) for k in range(1, 60)] + [mp.inf]
    tail = mp.quad(lambda xi: xi ** (a - 1) * h(xi), pts)
    return mp.re(head + tail) / mp.pi
