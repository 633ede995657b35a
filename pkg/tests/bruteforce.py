"""Independent oracles: whole-register matrices built with np.kron.

Nothing here imports rspsim; protocol results are recomputed from the
textbook operators so they can be compared against the package.
"""
import math

import numpy as np

I = np.eye(2)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Z = np.diag([1, -1]).astype(complex)
H = np.array([[1, 1], [1, -1]]) / math.sqrt(2)
P0 = np.diag([1, 0]).astype(complex)
P1 = np.diag([0, 1]).astype(complex)


def kron(*ops):
    out = np.array([[1.0 + 0j]])
    for op in ops:
        out = np.kron(out, op)
    return out


def normalize(v):
    return v / np.linalg.norm(v)


def target(theta, phi):
    return np.array([math.cos(theta), math.sin(theta) * np.exp(1j * phi)])


def partner(theta, phi):
    return np.array([math.sin(theta), -math.cos(theta) * np.exp(1j * phi)])


def A(q, n):
    return 0.5 * math.asin((2 * q - 1) ** n)


def explicit_rho(theta, phi, t, y):
    """Bob's averaged reduced state for channel |00>+t|11>, ancilla |0>+y|1>.

    Register order: Alice, Bob, ancilla.
    """
    psi = np.kron(normalize(np.array([1, 0, 0, t], dtype=complex)), normalize(np.array([1, y])))
    e = np.exp(1j * phi)
    U = np.array([[1, e], [np.conj(e), -1]]) / math.sqrt(2)
    cnot_b_anc = kron(I, P0, I) + kron(I, P1, X)
    psi = kron(U, I, I) @ psi
    rho_b = np.zeros((2, 2), dtype=complex)
    for bit, proj in ((0, P0), (1, P1)):
        br = kron(proj, I, I) @ psi
        if bit == 1:
            br = kron(I, Z, I) @ br
        br = cnot_b_anc @ br
        m = br.reshape(2, 2, 2)  # a, b, anc
        rho_b += np.einsum("abc,adc->bd", m, m.conj())
    return rho_b / np.trace(rho_b).real


def explicit_y(theta, q, n, upper=False):
    a_next = A(q, n + 1)
    if abs(math.sin(2 * theta)) < 1e-15:
        return 1j
    r = (1 / math.tan(2 * a_next)) / math.tan(2 * theta)
    a = abs(r)
    rad = (-1 if upper else 1) * 2 * a * r - a * a - 1
    return complex(a, math.sqrt(max(rad, 0.0)))


def ghz_branches(theta, phi):
    """All four (k, m) branches of the GHZ protocol: list of (prob, Bob's ket)."""
    c, s, e = math.cos(theta), math.sin(theta), np.exp(1j * phi)
    psi = np.zeros(8, dtype=complex)
    psi[0] = psi[7] = 1 / math.sqrt(2)
    psi = kron(np.array([[c, -s], [s, c]]), I, I) @ psi
    ua = {0: np.array([[1, 0], [0, -e]]), 1: np.array([[0, 1], [e, 0]])}
    ub = {0: I, 1: X}
    out = []
    for k, pk in ((0, P0), (1, P1)):
        b = kron(pk, I, I) @ psi
        b = kron(I, ua[k], ub[k]) @ b
        b = kron(I, H, I) @ b
        for m, pm in ((0, P0), (1, P1)):
            bb = kron(I, pm, I) @ b
            prob = float(np.vdot(bb, bb).real)
            if m == 1:
                bb = kron(I, I, Z) @ bb
            bob = bb.reshape(2, 2, 2)[k, m, :]
            out.append((prob, normalize(bob)))
    return out


def central_branches(theta, phi):
    """(prob, Bob's ket) for both outcomes of the maximally entangled protocol."""
    c, s, e = math.cos(theta), math.sin(theta), np.exp(1j * phi)
    U = np.array([[c, s * e], [s * np.conj(e), -c]])
    psi = kron(U, I) @ (np.array([1, 0, 0, 1]) / math.sqrt(2))
    out = []
    for bit, proj in ((0, P0), (1, P1)):
        b = kron(proj, I) @ psi
        if bit == 1:
            b = kron(I, Z) @ b
        out.append((float(np.vdot(b, b).real), normalize(b.reshape(2, 2)[bit])))
    return out
