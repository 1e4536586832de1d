"""Four-state trader algebra: X-operators, creation/annihilation expansions,
the chiral parity gamma5, and dense small-cluster Hamiltonians.

The site basis is ordered (empty, buy, sell, hold) = (|0>, |+>, |->, |2>),
indices 0..3.  X[rs] = |r><s| is the matrix unit; the creation and
annihilation operators expand as

    a_up+   = X[+0] - X[2-]      a_up   = X[0+] - X[-2]
    a_down+ = X[-0] + X[2+]      a_down = X[0-] + X[+2]

which satisfy the canonical anticommutation relations exactly on the 4x4
level.  Multi-site operators use parity strings (gamma5 is the on-site
fermion parity), giving proper anticommutation across sites of an open chain.
"""

from __future__ import annotations

import numpy as np

STATE_LABELS = ("0", "+", "-", "2")
STATE_NAMES = ("empty", "buy", "sell", "hold")
_STATE_INDEX = {label: i for i, label in enumerate(STATE_LABELS)}

# particles carried by each state: (up, down) occupation
_OCCUPATION = ((0, 0), (1, 0), (0, 1), (1, 1))


def state_index(state: int | str) -> int:
    if isinstance(state, str):
        key = state.strip()
        if key in _STATE_INDEX:
            return _STATE_INDEX[key]
        try:
            return STATE_NAMES.index(key)
        except ValueError:
            raise ValueError(f"unknown state {state!r}") from None
    if state not in (0, 1, 2, 3):
        raise ValueError(f"state index out of range: {state}")
    return state


def x_operator(r: int | str, s: int | str) -> np.ndarray:
    """Matrix unit X[rs] = |r><s| with the single entry 1 at (r, s)."""
    out = np.zeros((4, 4))
    out[state_index(r), state_index(s)] = 1.0
    return out


def creation_annihilation(sigma: str, dagger: bool) -> np.ndarray:
    """Creation/annihilation operator for spin side 'up' (buy) or 'down' (sell)."""
    if sigma not in ("up", "down"):
        raise ValueError("sigma must be 'up' or 'down'")
    if sigma == "up":
        mat = x_operator("+", "0") - x_operator("2", "-") if dagger \
            else x_operator("0", "+") - x_operator("-", "2")
    else:
        mat = x_operator("-", "0") + x_operator("2", "+") if dagger \
            else x_operator("0", "-") + x_operator("+", "2")
    return mat


def gamma5() -> np.ndarray:
    """Chiral parity diag(1, -1, -1, 1); equals on-site fermion parity (-1)^n."""
    return np.diag([1.0, -1.0, -1.0, 1.0])


def gamma5_identity_residual() -> float:
    """Max-abs residual of (X[00]-X[22])^2 - (X[++]-X[--])^2 - gamma5."""
    a = x_operator("0", "0") - x_operator("2", "2")
    b = x_operator("+", "+") - x_operator("-", "-")
    return float(np.max(np.abs(a @ a - b @ b - gamma5())))


def classify_operators() -> tuple[tuple[tuple[str, np.ndarray], ...], tuple[tuple[str, np.ndarray], ...]]:
    """The 8 fermionic and 6 bosonic on-site combinations, grading-verified.

    An operator is fermionic iff it anticommutes with the parity gamma5,
    i.e. changes the particle number by an odd amount.
    """
    fermionic_names = ("X[0+]", "X[0-]", "X[+0]", "X[-0]", "X[+2]", "X[-2]", "X[2+]", "X[2-]")
    bosonic_names = ("X[+-]", "X[-+]", "X[++]-X[--]", "X[02]", "X[20]", "X[00]-X[22]")

    def build(name: str) -> np.ndarray:
        if "-X[" in name:
            left, right = name.split("-X[")
            return _from_label(left) - _from_label("X[" + right)
        return _from_label(name)

    def _from_label(label: str) -> np.ndarray:
        r, s = label[2], label[3]
        return x_operator(r, s)

    parity = gamma5()
    fermionic, bosonic = [], []
    for name in fermionic_names:
        op = build(name)
        if np.max(np.abs(parity @ op @ parity + op)) > 1e-14:
            raise AssertionError(f"{name} failed odd-parity grading")
        fermionic.append((name, op))
    for name in bosonic_names:
        op = build(name)
        if np.max(np.abs(parity @ op @ parity - op)) > 1e-14:
            raise AssertionError(f"{name} failed even-parity grading")
        bosonic.append((name, op))
    return tuple(fermionic), tuple(bosonic)


def _site_operator(mat: np.ndarray, site: int, sites: int, fermionic: bool) -> np.ndarray:
    """Embed a 4x4 on-site operator into the 4^sites product space.

    Fermionic operators carry the parity string on all sites left of ``site``.
    """
    parity = gamma5()
    out = np.ones((1, 1))
    for i in range(sites):
        if i < site:
            factor = parity if fermionic else np.eye(4)
        elif i == site:
            factor = mat
        else:
            factor = np.eye(4)
        out = np.kron(out, factor)
    return out


def hamiltonian_dense(sites: int, w_hop: float, u_rep: float, mu: float) -> np.ndarray:
    """Dense Hubbard Hamiltonian on an open chain of 1..4 four-state sites.

    H = -W sum_<ij>,sigma (a+_sigma,i a_sigma,j + h.c.)
        + U sum_i n_up,i n_down,i - mu sum_i,sigma n_sigma,i

    For a single site the spectrum is {0, -mu, -mu, U - 2 mu}.
    """
    if not 1 <= sites <= 4:
        raise ValueError("sites must be between 1 and 4")
    dim = 4**sites
    ham = np.zeros((dim, dim))

    ops: dict[tuple[str, bool, int], np.ndarray] = {}
    for sigma in ("up", "down"):
        for dagger in (False, True):
            local = creation_annihilation(sigma, dagger)
            for i in range(sites):
                ops[sigma, dagger, i] = _site_operator(local, i, sites, fermionic=True)

    n_up_local = creation_annihilation("up", True) @ creation_annihilation("up", False)
    n_down_local = creation_annihilation("down", True) @ creation_annihilation("down", False)

    for i in range(sites):
        n_up = _site_operator(n_up_local, i, sites, fermionic=False)
        n_down = _site_operator(n_down_local, i, sites, fermionic=False)
        ham += u_rep * n_up @ n_down - mu * (n_up + n_down)

    for i in range(sites - 1):
        for sigma in ("up", "down"):
            hop = ops[sigma, True, i] @ ops[sigma, False, i + 1]
            ham += -w_hop * (hop + hop.T)
    return ham


def car_residuals() -> dict[str, float]:
    """Max-abs residuals of the canonical anticommutation relations on one site."""
    a = {
        ("up", False): creation_annihilation("up", False),
        ("down", False): creation_annihilation("down", False),
        ("up", True): creation_annihilation("up", True),
        ("down", True): creation_annihilation("down", True),
    }
    eye = np.eye(4)

    def anti(x: np.ndarray, y: np.ndarray) -> np.ndarray:
        return x @ y + y @ x

    out: dict[str, float] = {}
    for s1, s2 in (("up", "up"), ("up", "down"), ("down", "down")):
        delta = eye if s1 == s2 else np.zeros((4, 4))
        out[f"{{a_{s1}, a+_{s2}}}"] = float(np.max(np.abs(anti(a[s1, False], a[s2, True]) - delta)))
        out[f"{{a_{s1}, a_{s2}}}"] = float(np.max(np.abs(anti(a[s1, False], a[s2, False]))))
        out[f"{{a+_{s1}, a+_{s2}}}"] = float(np.max(np.abs(anti(a[s1, True], a[s2, True]))))
    return out


