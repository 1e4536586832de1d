"""Finite exterior algebra over eight generators and the supercoherent state.

Generators are chi_1..chi_4 (indices 0-3) and chi_1*..chi_4* (indices 4-7);
every element lives in the 256-dimensional algebra spanned by the square-free
monomials, encoded as bitmasks with coefficients in canonical ascending-index
order.  Products antisymmetrise, squares vanish, and conjugation stars the
generators and reverses products.

The supercoherent generator matrix couples the bosonic blocks

    (0,2) sector: [[E_z, E+], [E-, -E_z]]      (1,3) sector: [[h_z, h+], [h-, -h_z]]

through the fermionic chi* entries.  Its exponential is computed exactly over
the exterior algebra by scaling-and-squaring: the Grassmann directions
terminate by nilpotency and the scalar sector is controlled by the scaling
step, so the only error is floating-point roundoff.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .jackson import ConvergenceError
from .qcalc import f4

N_GENERATORS = 8
GENERATOR_NAMES = ("chi1", "chi2", "chi3", "chi4", "chi1*", "chi2*", "chi3*", "chi4*")

Vec3 = tuple[float, float, float]  # (plus, minus, z) components


def _mul_sign(a: int, b: int) -> int:
    """Sign of e_a * e_b for disjoint masks (inversions when merging)."""
    sign = 0
    j = b
    while j:
        low = j & -j
        sign += (a >> low.bit_length()).bit_count()
        j ^= low
    return -1 if sign & 1 else 1


def _inversions(seq: Sequence[int]) -> int:
    return sum(1 for i in range(len(seq)) for j in range(i + 1, len(seq)) if seq[i] > seq[j])


class GrassmannElement:
    """Element of the exterior algebra: {monomial bitmask: complex coefficient}."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict[int, complex] | None = None):
        self.terms = {m: complex(c) for m, c in (terms or {}).items() if c != 0}

    @classmethod
    def scalar(cls, value: complex) -> "GrassmannElement":
        return cls({0: value})

    @classmethod
    def generator(cls, index: int) -> "GrassmannElement":
        if not 0 <= index < N_GENERATORS:
            raise ValueError(f"generator index out of range: {index}")
        return cls({1 << index: 1.0})

    @property
    def scalar_part(self) -> complex:
        return self.terms.get(0, 0j)

    def grade(self, k: int) -> dict[int, complex]:
        return {m: c for m, c in self.terms.items() if m.bit_count() == k}

    def norm1(self) -> float:
        return sum(abs(c) for c in self.terms.values())

    def is_zero(self, tol: float = 0.0) -> bool:
        return all(abs(c) <= tol for c in self.terms.values())

    def __add__(self, other: "GrassmannElement") -> "GrassmannElement":
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0j) + c
        return GrassmannElement(out)

    def __sub__(self, other: "GrassmannElement") -> "GrassmannElement":
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0j) - c
        return GrassmannElement(out)

    def __neg__(self) -> "GrassmannElement":
        return GrassmannElement({m: -c for m, c in self.terms.items()})

    def scaled(self, factor: complex) -> "GrassmannElement":
        return GrassmannElement({m: c * factor for m, c in self.terms.items()})

    def __mul__(self, other: "GrassmannElement") -> "GrassmannElement":
        out: dict[int, complex] = {}
        for ma, ca in self.terms.items():
            for mb, cb in other.terms.items():
                if ma & mb:
                    continue
                m = ma | mb
                out[m] = out.get(m, 0j) + _mul_sign(ma, mb) * ca * cb
        return GrassmannElement(out)

    def conjugate(self) -> "GrassmannElement":
        """Star conjugation: chi_i <-> chi_i*, coefficients conjugated, products reversed."""
        out: dict[int, complex] = {}
        for mask, coeff in self.terms.items():
            idx = [i for i in range(N_GENERATORS) if mask >> i & 1]
            mapped = [i ^ 4 for i in reversed(idx)]
            sign = -1 if _inversions(mapped) & 1 else 1
            new_mask = 0
            for i in mapped:
                new_mask |= 1 << i
            out[new_mask] = out.get(new_mask, 0j) + sign * coeff.conjugate()
        return GrassmannElement(out)

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for mask in sorted(self.terms, key=lambda m: (m.bit_count(), m)):
            names = "*".join(GENERATOR_NAMES[i] for i in range(N_GENERATORS) if mask >> i & 1)
            c = self.terms[mask]
            parts.append(f"({c:.6g})" + (f" {names}" if names else ""))
        return " + ".join(parts)


_ZERO = GrassmannElement()
_ONE = GrassmannElement.scalar(1.0)


class SuperMatrix:
    """4x4 matrix with GrassmannElement entries."""

    __slots__ = ("rows",)

    def __init__(self, rows: Sequence[Sequence[GrassmannElement]]):
        if len(rows) != 4 or any(len(r) != 4 for r in rows):
            raise ValueError("SuperMatrix must be 4x4")
        self.rows = [list(r) for r in rows]

    @classmethod
    def zeros(cls) -> "SuperMatrix":
        return cls([[_ZERO] * 4 for _ in range(4)])

    @classmethod
    def identity(cls) -> "SuperMatrix":
        return cls([[_ONE if i == j else _ZERO for j in range(4)] for i in range(4)])

    @classmethod
    def from_scalar(cls, mat: np.ndarray) -> "SuperMatrix":
        return cls([[GrassmannElement.scalar(mat[i, j]) for j in range(4)] for i in range(4)])

    def scalar_matrix(self) -> np.ndarray:
        return np.array([[self.rows[i][j].scalar_part for j in range(4)] for i in range(4)])

    def __matmul__(self, other: "SuperMatrix") -> "SuperMatrix":
        out = SuperMatrix.zeros()
        for i in range(4):
            for j in range(4):
                acc = _ZERO
                for k in range(4):
                    a, b = self.rows[i][k], other.rows[k][j]
                    if a.terms and b.terms:
                        acc = acc + a * b
                out.rows[i][j] = acc
        return out

    def __add__(self, other: "SuperMatrix") -> "SuperMatrix":
        return SuperMatrix([[self.rows[i][j] + other.rows[i][j] for j in range(4)] for i in range(4)])

    def scaled(self, factor: complex) -> "SuperMatrix":
        return SuperMatrix([[e.scaled(factor) for e in row] for row in self.rows])

    def norm(self) -> float:
        return max(sum(e.norm1() for e in row) for row in self.rows)

    def column(self, j: int) -> list[GrassmannElement]:
        return [self.rows[i][j] for i in range(4)]

    def row(self, i: int) -> list[GrassmannElement]:
        return list(self.rows[i])

    def adjoint(self) -> "SuperMatrix":
        """Transpose with entry-wise star conjugation."""
        return SuperMatrix([[self.rows[j][i].conjugate() for j in range(4)] for i in range(4)])


def scs_matrix(e_field: Vec3, h_field: Vec3) -> SuperMatrix:
    """Supercoherent generator with fermionic chi* couplings and bosonic E/h blocks."""
    ep, em, ez = e_field
    hp, hm, hz = h_field
    g = GrassmannElement.generator
    s = GrassmannElement.scalar
    chi1s, chi2s, chi3s, chi4s = g(4), g(5), g(6), g(7)
    return SuperMatrix(
        [
            [s(ez), _ZERO, _ZERO, s(ep)],
            [chi1s, s(hz), s(hp), _ZERO],
            [chi2s, s(hm), s(-hz), _ZERO],
            [s(em), -chi3s, chi4s, s(-ez)],
        ]
    )


def grassmann_exp(m: SuperMatrix) -> SuperMatrix:
    """Matrix exponential over the exterior algebra (scaling and squaring).

    Nilpotency makes the fermionic directions exact; the scalar sector is
    scaled below norm 1/2 so the power series converges at machine precision.
    """
    norm = m.norm()
    squarings = max(0, math.ceil(math.log2(norm / 0.5))) if norm > 0.5 else 0
    a = m.scaled(0.5**squarings)

    acc = SuperMatrix.identity()
    term = SuperMatrix.identity()
    for k in range(1, 240):
        term = (term @ a).scaled(1.0 / k)
        acc = acc + term
        if term.norm() <= 1e-22 * max(1.0, acc.norm()):
            break
    else:
        raise ConvergenceError("grassmann_exp series did not converge")

    for _ in range(squarings):
        acc = acc @ acc
    return acc


def _ch_shr(m2: complex) -> tuple[complex, complex]:
    """(cosh m, sinh(m)/m) from m^2, stable for either sign and near zero."""
    if abs(m2) < 1e-8:
        return 1 + m2 / 2 + m2 * m2 / 24, 1 + m2 / 6 + m2 * m2 / 120
    m = cmath.sqrt(m2)
    return cmath.cosh(m), cmath.sinh(m) / m


def _real_ch_shr(m2: float) -> tuple[float, float]:
    ch, shr = _ch_shr(m2)
    return ch.real, shr.real


@dataclass(frozen=True)
class ScsBracket:
    """Bosonic-sector coherent ket/bra and their pairing."""

    ket: np.ndarray
    bra: np.ndarray
    norm: float


def scs_bracket(e_field: Vec3, h_field: Vec3) -> ScsBracket:
    """Closed-form bosonic coherent state: ket, bra, and <G|G>.

    ket = (ch E + E_z sh E / E, 0, 0, E- sh E / E)
    bra = (ch E - E_z sh E / E, 0, 0, -E+ sh E / E)

    The pairing is ch^2 - sh^2 = 1 identically, for any E.
    """
    ep, em, ez = e_field
    ch, shr = _real_ch_shr(ez * ez + ep * em)
    ket = np.array([ch + ez * shr, 0.0, 0.0, em * shr])
    bra = np.array([ch - ez * shr, 0.0, 0.0, -ep * shr])
    return ScsBracket(ket=ket, bra=bra, norm=float(bra @ ket))


def coherent_ket(e_field: Vec3, h_field: Vec3) -> list[GrassmannElement]:
    """exp(M)|0>: first column of the exponential of the supercoherent generator."""
    return grassmann_exp(scs_matrix(e_field, h_field)).column(0)


@dataclass(frozen=True)
class ScsDiscrepancy:
    component: int
    kind: str
    detail: str


# documented open question: at E = h = 0 the printed fourth ket component is
# 2 chi2 chi1, while the direct exponential gives (chi4* chi2* - chi3* chi1*)/2
_CASE_A_KIND = "documented-case-a-fourth-component"


def scs_structure_report(
    e_field: Vec3, h_field: Vec3, tol: float = 1e-10
) -> list[ScsDiscrepancy]:
    """Compare exp(M)|0> against the printed first-order structure.

    Checks: scalar parts of components (0, 3) equal the bosonic closed form
    and vanish on (1, 2); first-order parts of (1, 2) are supported only on
    chi1*, chi2*; first-order parts of (0, 3) vanish.  An empty report means
    the printed structure is reproduced.  At E = h = 0 the report always
    carries the documented fourth-component entry (ground truth here is the
    direct exponential, not the printed special case).
    """
    ket = coherent_ket(e_field, h_field)
    closed = scs_bracket(e_field, h_field)
    expected_scalar = [closed.ket[0], 0.0, 0.0, closed.ket[3]]

    report: list[ScsDiscrepancy] = []
    for i in range(4):
        got = ket[i].scalar_part
        want = expected_scalar[i]
        if abs(got - want) > tol * (1.0 + abs(want)):
            report.append(
                ScsDiscrepancy(i, "scalar-part", f"got {got:.12g}, expected {want:.12g}")
            )

    allowed = {1 << 4, 1 << 5}  # chi1*, chi2*
    for i in range(4):
        g1 = {m: c for m, c in ket[i].grade(1).items() if abs(c) > tol}
        if i in (1, 2):
            bad = set(g1) - allowed
            if bad:
                names = [GENERATOR_NAMES[m.bit_length() - 1] for m in bad]
                report.append(ScsDiscrepancy(i, "first-order-support", f"unexpected {names}"))
        elif g1:
            report.append(ScsDiscrepancy(i, "first-order-support", "expected none"))

    if all(v == 0 for v in (*e_field, *h_field)):
        direct = ket[3].grade(2)
        printed = (GrassmannElement.generator(1) * GrassmannElement.generator(0)).scaled(2.0)
        delta = GrassmannElement(direct) - printed
        if not delta.is_zero(tol):
            report.append(
                ScsDiscrepancy(
                    3,
                    _CASE_A_KIND,
                    f"direct exponential {GrassmannElement(direct)!r} vs printed {printed!r}",
                )
            )
    return report


def bra_comparison(e_field: Vec3, h_field: Vec3, tol: float = 1e-10) -> dict:
    """Adjoint-exponential bra against the printed closed form (not asserted).

    Returns both candidates and the component-wise scalar deviations; sign
    structure differences between the two constructions are surfaced here
    rather than absorbed.
    """
    closed = scs_bracket(e_field, h_field)
    adj_row = grassmann_exp(scs_matrix(e_field, h_field).adjoint()).row(0)
    scalars = np.array([g.scalar_part.real for g in adj_row])
    deviations = [
        (i, float(scalars[i]), float(closed.bra[i]))
        for i in range(4)
        if abs(scalars[i] - closed.bra[i]) > tol * (1.0 + abs(closed.bra[i]))
    ]
    return {"printed": closed.bra, "adjoint_first_row": adj_row, "scalar_deviations": deviations}


@dataclass(frozen=True)
class OperatorSymbols:
    """Coherent-state symbols: the E-hat matrix, f4, and magnetic spin symbols."""

    e_hat: np.ndarray
    f4: float
    sq_plus: float
    sq_minus: float
    sq_z: float
    e_invariant: float
    h_invariant: float

    def spin_components(self, alpha: float) -> dict[str, GrassmannElement]:
        """Total spin symbols (1 - alpha) S_q + alpha * fermion bilinear.

        alpha interpolates between the delocalised (smooth) and localised
        (fractal) contributions; the bilinears are exterior-algebra valued.
        """
        if not 0.0 <= alpha <= 1.0:
            raise ValueError("alpha must lie in [0, 1]")
        g = GrassmannElement.generator
        chi1, chi2, chi1s, chi2s = g(0), g(1), g(4), g(5)
        s = GrassmannElement.scalar
        return {
            "S+": s((1 - alpha) * self.sq_plus) + (chi1s * chi2).scaled(alpha),
            "S-": s((1 - alpha) * self.sq_minus) + (chi2s * chi1).scaled(alpha),
            "Sz": s((1 - alpha) * self.sq_z)
            + (chi1s * chi1 - chi2s * chi2).scaled(alpha),
        }


def op_symbols(e_field: Vec3, h_field: Vec3) -> OperatorSymbols:
    """Operator symbols on the coherent state for given field vectors."""
    ep, em, ez = e_field
    hp, hm, hz = h_field
    e2 = ez * ez + ep * em
    h2 = hz * hz + hp * hm
    if e2 < 0 or h2 < 0:
        raise ValueError("op_symbols needs real invariants (E^2, h^2 >= 0)")
    ch_e, shr_e = _real_ch_shr(e2)
    ch_h, shr_h = _real_ch_shr(h2)

    e_hat = np.array(
        [
            [ch_e + ez * shr_e, ep * shr_e],
            [em * shr_e, ch_e - ez * shr_e],
        ]
    )
    return OperatorSymbols(
        e_hat=e_hat,
        f4=f4(math.sqrt(e2), math.sqrt(h2)),
        sq_plus=hp * shr_h * (ch_h + hz * shr_h),
        sq_minus=hm * shr_h * (ch_h - hz * shr_h),
        sq_z=ch_h * ch_h + shr_h * shr_h * (hz * hz - hp * hm),
        e_invariant=math.sqrt(e2),
        h_invariant=math.sqrt(h2),
    )


def pseudospin_symbols(
    e_field: tuple[complex, complex, complex]
) -> tuple[complex, complex, complex]:
    """Pseudospin symbols (rho3, rho+, rho-) on the bosonic ket components.

    Complex field values are allowed here: the special sphere E = i pi/2
    turns the hyperbolic state into a unit spin vector with
    rho3^2 + 4 rho+ rho- = 1.
    """
    ep, em, ez = (complex(v) for v in e_field)
    ch, shr = _ch_shr(ez * ez + ep * em)
    z0 = ch + ez * shr
    z2 = em * shr
    rho3 = z0.conjugate() * z0 - z2.conjugate() * z2
    rho_plus = z0.conjugate() * z2
    rho_minus = z2.conjugate() * z0
    return rho3, rho_plus, rho_minus
