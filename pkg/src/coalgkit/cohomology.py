"""The standard complex of a coalgebra with bicomodule coefficients, the
extensions classified by its 2-cocycles, and the derived decision
procedures: coseparability, relative injectivity, formal smoothness.

A degree-n cochain is a linear map L -> C^(x)n.  The differential
alternates the two coactions on the outside with the comultiplication
applied in each inner position.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .bicomodule import (
    Bicomodule,
    BicomoduleMap,
    induced_on_cokernel,
    regular_bicomodule,
    tensor_square_bicomodule,
)
from .coalgebra import Coalgebra, CoalgebraMap, NotCoalgebraMap, validate_coalgebra
from .exactlin import (
    DimensionMismatch,
    Matrix,
    Subspace,
    column_space,
    kernel,
    kron,
    solve,
    solve_matrix_equations,
    subspace_sum,
)


class NotACocycle(ValueError):
    def __init__(self, witness: Matrix):
        super().__init__("the square of the differential witness is nonzero")
        self.witness = witness


class InternalCheckFailed(AssertionError):
    """A mathematically guaranteed verification failed; convention bug."""


@dataclass(frozen=True)
class Cochain:
    degree: int
    value: Matrix  # C^(x)degree rows, L columns (degree 0: one row)

    def __post_init__(self):
        if self.degree < 0:
            raise ValueError("cochain degree must be nonnegative")


def _check_shape(c: Coalgebra, l: Bicomodule, f: Cochain):
    expected = c.dim**f.degree
    if f.value.shape != (expected, l.dim):
        raise DimensionMismatch(
            f"degree-{f.degree} cochain must be {expected}x{l.dim}, got {f.value.shape}"
        )


def face(c: Coalgebra, l: Bicomodule, f: Cochain, i: int) -> Matrix:
    """The i-th face of a degree-n cochain, 0 <= i <= n + 1.

    Face 0 pushes through the right coaction, face n + 1 through the left
    coaction, and face i for 0 < i <= n comultiplies the i-th tensor slot
    counted from the right.
    """
    _check_shape(c, l, f)
    n = f.degree
    if not 0 <= i <= n + 1:
        raise ValueError(f"face index {i} out of range for degree {n}")
    nn = c.dim
    if i == 0:
        return kron(f.value, Matrix.identity(nn)) * l.rho_r
    if i == n + 1:
        return kron(Matrix.identity(nn), f.value) * l.rho_l
    middle = kron(
        Matrix.identity(nn ** (n - i)),
        kron(c.delta, Matrix.identity(nn ** (i - 1))),
    )
    return middle * f.value


def differential(c: Coalgebra, l: Bicomodule, f: Cochain) -> Cochain:
    """b(f) = alternating sum of the faces; raises the degree by one."""
    n = f.degree
    out = Matrix.zero(c.dim ** (n + 1), l.dim)
    for i in range(n + 2):
        term = face(c, l, f, i)
        out = out + (term if i % 2 == 0 else -term)
    return Cochain(n + 1, out)


def differential_matrix(c: Coalgebra, l: Bicomodule, degree: int) -> Matrix:
    """b^degree as a matrix on vectorized cochains (index = row * dim L + col)."""
    n, m = c.dim, l.dim
    rows_in = n**degree
    rows_out = n ** (degree + 1)
    data = {}

    def add(out_row, out_col, in_row, in_col, v):
        key = (out_row * m + out_col, in_row * m + in_col)
        s = data.get(key, 0) + v
        if s:
            data[key] = s
        else:
            data.pop(key, None)

    # face 0: F -> (F (x) C) rho_r ; coefficient of F[r, a] from rho_r entries
    for (ra, cc), v in l.rho_r.data.items():
        a, s = divmod(ra, n)
        for r in range(rows_in):
            add(r * n + s, cc, r, a, v)
    # face degree+1: F -> (C (x) F) rho_l
    sign_last = 1 if (degree + 1) % 2 == 0 else -1
    for (ra, cc), v in l.rho_l.data.items():
        s, a = divmod(ra, m)
        for r in range(rows_in):
            add(s * rows_in + r, cc, r, a, sign_last * v)
    # inner faces: F -> (C^(n-i) (x) delta (x) C^(i-1)) F
    for i in range(1, degree + 1):
        sign = 1 if i % 2 == 0 else -1
        g = kron(
            Matrix.identity(n ** (degree - i)),
            kron(c.delta, Matrix.identity(n ** (i - 1))),
        )
        for (r_out, r_in), v in g.data.items():
            for col in range(m):
                add(r_out, col, r_in, col, sign * v)
    return Matrix(rows_out * m, rows_in * m, data)


def _vectorize(f: Matrix) -> Matrix:
    m = f.cols
    return Matrix(f.rows * m, 1, {(i * m + j, 0): v for (i, j), v in f.data.items()})


def _unvectorize(v: Matrix, rows: int, cols: int) -> Matrix:
    return Matrix(rows, cols, {divmod(i, cols): val for (i, _), val in v.data.items()})


@dataclass(frozen=True)
class CohomologyResult:
    degree: int
    dim: int
    representatives: tuple  # cocycle Cochains spanning the quotient


def cohomology(c: Coalgebra, l: Bicomodule, degree: int) -> CohomologyResult:
    """dim Ker(b^degree) - rank(b^(degree-1)) with explicit representatives."""
    if degree < 0:
        raise ValueError("degree must be nonnegative")
    n, m = c.dim, l.dim
    b_here = differential_matrix(c, l, degree)
    cocycles = kernel(b_here)
    if degree == 0:
        boundaries = Subspace.zero(n**degree * m)
    else:
        boundaries = column_space(differential_matrix(c, l, degree - 1))
    reps = []
    span = boundaries
    for col in cocycles.basis.columns():
        grown = subspace_sum(span, Subspace.span(span.ambient_dim, [col]))
        if grown.dim > span.dim:
            vec = Matrix(n**degree * m, 1, {(k, 0): v for k, v in col.items()})
            reps.append(Cochain(degree, _unvectorize(vec, n**degree, m)))
            span = grown
    return CohomologyResult(degree, cocycles.dim - boundaries.dim, tuple(reps))


# -- square-zero extensions ------------------------------------------------------


@dataclass(frozen=True)
class HochschildExtensionData:
    base: Coalgebra
    cok: Bicomodule
    cocycle: Cochain
    total: Coalgebra
    sigma: CoalgebraMap  # base -> total
    proj: Matrix  # total -> cokernel bicomodule
    retraction: Matrix  # linear retraction total -> base


def extension_structure(c: Coalgebra, l: Bicomodule, zeta_value: Matrix):
    """The candidate comultiplication and counit on C (+) L twisted by a cochain.

    No cocycle condition is checked here; the result is coassociative
    exactly when the cochain is a 2-cocycle.
    """
    n, m = c.dim, l.dim
    total_dim = n + m
    i_c = Matrix(total_dim, n, {(i, i): 1 for i in range(n)})
    i_l = Matrix(total_dim, m, {(n + j, j): 1 for j in range(m)})
    p_c = i_c.transpose()
    p_l = i_l.transpose()
    delta = kron(i_c, i_c) * c.delta * p_c
    delta = delta + kron(i_l, i_c) * l.rho_r * p_l
    delta = delta + kron(i_c, i_l) * l.rho_l * p_l
    delta = delta - kron(i_c, i_c) * zeta_value * p_l
    eps = c.epsilon * p_c + kron(c.epsilon, c.epsilon) * zeta_value * p_l
    return delta, eps, i_c, i_l, p_c, p_l


def hochschild_extension(c: Coalgebra, l: Bicomodule, zeta: Cochain) -> HochschildExtensionData:
    """Build the extension with square-zero cokernel defined by a 2-cocycle.

    Refuses non-cocycles.  All four structural properties of the result are
    verified exactly: the total is a coalgebra, the base includes as a
    coalgebra with a linear retraction, the base wedges to everything, and
    the coactions of the cokernel are recovered from the comultiplication.
    """
    if zeta.degree != 2:
        raise ValueError("the twisting cochain must have degree two")
    _check_shape(c, l, zeta)
    obstruction = differential(c, l, zeta)
    if not obstruction.value.is_zero():
        raise NotACocycle(obstruction.value)
    delta, eps, i_c, i_l, p_c, p_l = extension_structure(c, l, zeta.value)
    total = Coalgebra(c.dim + l.dim, delta, eps)
    report = validate_coalgebra(total)
    if not report.passed:
        raise InternalCheckFailed(f"twisted structure fails axioms:\n{report}")
    sigma = CoalgebraMap(c, total, i_c)
    if p_c * i_c != Matrix.identity(c.dim):
        raise InternalCheckFailed("retraction does not split the inclusion")
    if not (kron(p_l, p_l) * delta).is_zero():
        raise InternalCheckFailed("base does not wedge to the whole extension")
    if l.rho_l * p_l != kron(p_c, p_l) * delta:
        raise InternalCheckFailed("left coaction is not recovered")
    if l.rho_r * p_l != kron(p_l, p_c) * delta:
        raise InternalCheckFailed("right coaction is not recovered")
    return HochschildExtensionData(
        base=c,
        cok=l,
        cocycle=zeta,
        total=total,
        sigma=sigma,
        proj=p_l,
        retraction=p_c,
    )


def trivialize_extension(e: HochschildExtensionData) -> Optional[CoalgebraMap]:
    """A coalgebra retraction of the extension, when the cocycle bounds.

    Solves the linear coboundary problem first; on a witness h the candidate
    retraction is the linear one corrected by h up to sign, and the
    candidate is verified exactly before being returned.  Returns None when
    the cocycle is not a coboundary.
    """
    c, l = e.base, e.cok
    b1 = differential_matrix(c, l, 1)
    h_vec = solve(b1, _vectorize(e.cocycle.value))
    if h_vec is None:
        return None
    h = _unvectorize(h_vec, c.dim, l.dim)
    for sign in (1, -1):
        candidate = e.retraction + (h * e.proj).scale(sign)
        try:
            ret = CoalgebraMap(e.total, e.base, candidate)
        except NotCoalgebraMap:
            continue
        if candidate * e.sigma.map == Matrix.identity(c.dim):
            return ret
    raise InternalCheckFailed("coboundary witness produced no valid retraction")


# -- decision procedures -----------------------------------------------------------


def is_coseparable(c: Coalgebra) -> Optional[Matrix]:
    """A bicomodule retraction of the comultiplication, or None.

    The retraction pi : C (x) C -> C must satisfy pi delta = id and
    intertwine the outer coactions of C (x) C with the comultiplication.
    """
    n = c.dim
    eye = Matrix.identity(n)
    outer = tensor_square_bicomodule(c)

    def residual(pi: Matrix):
        return [
            pi * c.delta - eye,
            c.delta * pi - kron(eye, pi) * outer.rho_l,
            c.delta * pi - kron(pi, eye) * outer.rho_r,
        ]

    return solve_matrix_equations((n, n * n), residual)


def is_I_injective(m: Bicomodule) -> Optional[Matrix]:
    """A bicomodule retraction of the canonical embedding into C (x) M (x) C.

    The embedding j = (C (x) rho_r) rho_l cosplits linearly via the counits,
    so it lies in the cosplit class; a bicomodule retraction of it exists
    exactly when m is a direct summand of the relatively injective
    C (x) M (x) C, i.e. when m is itself relatively injective.
    """
    c = m.over
    n, md = c.dim, m.dim
    eye_c = Matrix.identity(n)
    j = kron(eye_c, m.rho_r) * m.rho_l
    big_rho_l = kron(c.delta, Matrix.identity(md * n))
    big_rho_r = kron(Matrix.identity(n * md), c.delta)

    def residual(r: Matrix):
        return [
            r * j - Matrix.identity(md),
            m.rho_l * r - kron(eye_c, r) * big_rho_l,
            m.rho_r * r - kron(r, eye_c) * big_rho_r,
        ]

    return solve_matrix_equations((md, n * md * n), residual)


@dataclass(frozen=True)
class SmoothnessResult:
    smooth: bool
    witness: Optional[Matrix]  # retraction for Coker(delta) when smooth
    h2_dim: int  # dim H^2 with coefficients in Coker(delta)
    cokernel: Bicomodule

    def __bool__(self):
        return self.smooth


def is_formally_smooth(c: Coalgebra) -> SmoothnessResult:
    """Decide formal smoothness via relative injectivity of Coker(delta).

    Cross-checks against the vanishing of the second cohomology with
    coefficients in that same cokernel and refuses to answer if the two
    criteria ever disagree.
    """
    reg = regular_bicomodule(c)
    square = tensor_square_bicomodule(c)
    delta_map = BicomoduleMap(reg, square, c.delta)
    cok, _ = induced_on_cokernel(delta_map)
    witness = is_I_injective(cok)
    h2 = cohomology(c, cok, 2)
    if (witness is not None) != (h2.dim == 0):
        raise InternalCheckFailed(
            f"injectivity of the cokernel ({witness is not None}) and "
            f"H^2 vanishing (dim={h2.dim}) disagree"
        )
    return SmoothnessResult(witness is not None, witness, h2.dim, cok)
