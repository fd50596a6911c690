"""Independent reference values for the unit tests.

Everything here is rebuilt from scratch with numpy/scipy: the Fock space by
explicit Jordan-Wigner strings, the Lindblad equation in matrix form, and
time integration with an adaptive 8th order Runge-Kutta at tight tolerance.
Run from the repository root; writes tests/unit/oracle_values.hpp.
"""

import numpy as np
from scipy.integrate import solve_ivp
from scipy.linalg import null_space

OUT = "tests/unit/oracle_values.hpp"


def ab(L, gamma, antiperiodic):
    A = np.zeros((L, L))
    B = np.zeros((L, L))
    for n in range(L):
        A[n, n] = -gamma
        m = (n + 1) % L
        sign = -1.0 if (antiperiodic and m == 0) else 1.0
        A[n, m] += -0.5 * sign
        A[m, n] += -0.5 * sign
        B[n, m] += -0.5 * sign
        B[m, n] -= -0.5 * sign
    return A, B


def annihilators(L):
    dim = 2 ** L
    cs = []
    for n in range(L):
        c = np.zeros((dim, dim))
        for s in range(dim):
            if s >> n & 1:
                sign = (-1) ** bin(s & ((1 << n) - 1)).count("1")
                c[s ^ (1 << n), s] = sign
        cs.append(c)
    return cs


def hamiltonian(cs, A, B):
    L = len(cs)
    H = np.zeros_like(cs[0])
    for m in range(L):
        for n in range(L):
            H += A[m, n] * cs[m].T @ cs[n]
            H += 0.5 * B[m, n] * (cs[m].T @ cs[n].T + cs[n] @ cs[m])
    return 2.0 * H


def jumps(cs, kind, kappa, eta):
    out = []
    if kind in ("decay", "mixed"):
        out += [(np.sqrt(kappa), c) for c in cs]
    if kind == "pump":
        out += [(np.sqrt(kappa), c.T) for c in cs]
    if kind == "mixed":
        out += [(np.sqrt(eta * kappa), c.T) for c in cs]
    if kind == "dephasing":
        out += [(np.sqrt(kappa), c.T @ c) for c in cs]
    return [(r * W).astype(complex) for r, W in out]


def evolve(L, antiperiodic, kind, kappa, eta, tau, t_samples, t_in_factor=5.0):
    cs = annihilators(L)
    H0 = hamiltonian(cs, *ab(L, 0.0, antiperiodic))
    H1 = hamiltonian(cs, *ab(L, 1.0, antiperiodic)) - H0
    Ws = jumps(cs, kind, kappa, eta)
    dim = 2 ** L

    def H(g):
        return H0 + g * H1

    w, v = np.linalg.eigh(H(t_in_factor))
    psi = v[:, 0].astype(complex)
    rho0 = np.outer(psi, psi.conj())

    def rhs(t, y):
        r = y.reshape(dim, dim)
        h = H(-t / tau)
        d = -1j * (h @ r - r @ h)
        for W in Ws:
            WdW = W.conj().T @ W
            d += W @ r @ W.conj().T - 0.5 * (WdW @ r + r @ WdW)
        return d.ravel()

    sol = solve_ivp(rhs, (-t_in_factor * tau, 0.0), rho0.ravel(), method="DOP853",
                    rtol=1e-12, atol=1e-13, t_eval=t_samples)
    eps = []
    for t, y in zip(sol.t, sol.y.T):
        g = -t / tau
        r = y.reshape(dim, dim)
        e = np.trace(H(g) @ r).real
        e0 = np.linalg.eigvalsh(H(g))[0]
        eps.append((e - e0) / L)
    return eps


def ground(L, gamma, antiperiodic):
    cs = annihilators(L)
    return np.linalg.eigvalsh(hamiltonian(cs, *ab(L, gamma, antiperiodic)))[0]


def pair_ops():
    # basis |0>, |1_k>, |1_-k>, |1_k 1_-k> = c+_k c+_-k |0>
    ck = np.zeros((4, 4))
    ck[0, 1] = 1
    ck[2, 3] = 1
    cmk = np.zeros((4, 4))
    cmk[0, 2] = 1
    cmk[1, 3] = -1
    return ck, cmk


def hk(k, g):
    d = g + np.cos(k)
    s = np.sin(k)
    return np.array([[0, 0, 0, 2 * s], [0, -2 * d, 0, 0], [0, 0, -2 * d, 0], [2 * s, 0, 0, -4 * d]])


def pair_steady(k, g, kind, kappa, eta=0.0):
    ck, cmk = pair_ops()
    Ws = []
    if kind in ("decay", "mixed"):
        Ws += [np.sqrt(kappa) * ck, np.sqrt(kappa) * cmk]
    if kind == "pump":
        Ws += [np.sqrt(kappa) * ck.T, np.sqrt(kappa) * cmk.T]
    if kind == "mixed":
        Ws += [np.sqrt(eta * kappa) * ck.T, np.sqrt(eta * kappa) * cmk.T]
    h = hk(k, g)
    I = np.eye(4)
    # column-stacking vec: vec(A X B) = (B^T kron A) vec(X)
    Lv = -1j * (np.kron(I, h) - np.kron(h.T, I))
    for W in Ws:
        WdW = W.conj().T @ W
        Lv += np.kron(W.conj(), W) - 0.5 * np.kron(I, WdW) - 0.5 * np.kron(WdW.T, I)
    ns = null_space(Lv)
    assert ns.shape[1] == 1
    r = ns[:, 0].reshape(4, 4, order="F")
    r /= np.trace(r)
    nk = np.trace(ck.T @ ck @ r).real
    return np.trace(h @ r).real, nk


def main():
    lines = []

    def emit(name, value):
        lines.append(f"inline constexpr double {name} = {float(value)!r};")

    for g in (0.0, 1.0, 5.0):
        emit(f"kGroundL4Gamma{int(g)}", ground(4, g, True))
    for g in (0.0, 2.0):
        emit(f"kGroundL5Gamma{int(g)}", ground(5, g, False))

    k, gi = np.pi / 2, 5.0
    w, v = np.linalg.eigh(np.array([[-2 * (gi + np.cos(k)), 2 * np.sin(k)], [2 * np.sin(k), 2 * (gi + np.cos(k))]]))
    emit("kInitV2HalfPiGamma5", v[1, 0] ** 2)

    cases = [
        ("None", 4, True, "none", 0.0, 0.0, 3.0),
        ("Decay", 4, True, "decay", 0.1, 0.0, 5.0),
        ("Pump", 4, True, "pump", 0.1, 0.0, 1.0),
        ("Mixed", 4, True, "mixed", 0.2, 0.5, 2.0),
        ("DecayL6", 6, True, "decay", 0.05, 0.0, 1.0),
        ("Dephasing", 5, False, "dephasing", 0.2, 0.0, 2.0),
        ("NoneOdd", 5, False, "none", 0.0, 0.0, 2.0),
    ]
    for name, L, anti, kind, kappa, eta, tau in cases:
        ts = [-2 * tau, -tau, 0.0]
        eps = evolve(L, anti, kind, kappa, eta, tau, ts)
        lines.append(f"// {kind} L={L} kappa={kappa} eta={eta} tau={tau}: eps at t = -2 tau, -tau, 0")
        lines.append(f"inline constexpr double kEps{name}[3] = {{{float(eps[0])!r}, {float(eps[1])!r}, {float(eps[2])!r}}};")

    for name, kind, kk, eta in (("Decay", "decay", np.pi / 4, 0.0), ("Pump", "pump", np.pi / 4, 0.0),
                                ("PumpHalfPi", "pump", np.pi / 2, 0.0), ("Balanced", "mixed", np.pi / 4, 1.0)):
        e, nk = pair_steady(kk, 0.0, kind, 0.1, eta)
        emit(f"kSteady{name}Energy", e)
        emit(f"kSteady{name}Occupation", nk)

    with open(OUT, "w") as f:
        f.write("#pragma once\n\n// Generated by tests/oracles/freeze_values.py. Do not edit.\n\n")
        f.write("namespace oracle {\n\n")
        f.write("\n".join(lines))
        f.write("\n\n}  // namespace oracle\n")


if __name__ == "__main__":
    main()
