#!/usr/bin/env python3
"""Regenerates the baseline filter tables in src/core/fixtures.cpp.

qmf32: 32-tap linear-phase QMF lowpass obtained by minimizing Johnston's
criterion (reconstruction ripple plus weighted stopband energy) with the
"D" transition width of 0.043 fs.
equiripple: Parks-McClellan lowpass for 4x audio interpolation, cutoff
5.51 kHz at 44.1 kHz, passband gain 4.
"""
import numpy as np
from scipy import optimize, signal

GRID = np.linspace(0.0, np.pi, 2048)


def qmf_response(half):
    h = np.concatenate([half, half[::-1]])
    n = np.arange(h.size)
    e = np.exp(-1j * np.outer(GRID, n))
    return h, np.abs(e @ h)


def johnston_cost(half, ws, alpha):
    _, mag = qmf_response(half)
    mirror = mag[::-1]
    ripple = np.mean((mag**2 + mirror**2 - 1.0) ** 2)
    stop = np.mean(np.where(GRID >= ws, mag**2, 0.0))
    return ripple + alpha * stop


def design_qmf32():
    ws = 2.0 * np.pi * (0.25 + 0.043)
    init = signal.firwin(32, 0.5)
    init /= np.sum(init)
    res = optimize.minimize(johnston_cost, init[:16], args=(ws, 2.0),
                            method="BFGS", options={"gtol": 1e-12, "maxiter": 20000})
    h, _ = qmf_response(res.x)
    return h / np.sum(h)


def design_equiripple():
    return signal.remez(127, [0, 5000, 6000, 22050], [4.0, 0.0], weight=[1, 10], fs=44100)


def emit(name, taps):
    body = ",\n".join("    %.17g" % t for t in taps)
    return "const std::array<double, %d> %s = {\n%s};\n" % (len(taps), name, body)


if __name__ == "__main__":
    print(emit("kQmf32", design_qmf32()))
    print(emit("kEquiripple127", design_equiripple()))
