"""Knot expressions and the closed-form sequence transforms.

The expression grammar covers exactly the operations computed with here:
torus knots, mirrors, connected sums, and (2, q)-cables:

    expr := term ('#' term)*
    term := ['-'] atom
    atom := 'T(' int ',' int ')' | 'C2(' int ';' expr ')' | 'U' | '(' expr ')'

Evaluation produces the gamma_0 parameter sequence of the knot.  Mirrors
negate the sequence, connected sums run the tensor -> reduce -> simplify ->
extract pipeline on standard-complex representatives (sound because local
equivalence is preserved by tensoring), and (2, q)-cables of staircases carry
the closed-form sequence transform, verified elsewhere against the pipeline.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .algebra import LaurentPoly, Mode, alexander_torus
from .complexes import ChainComplex
from .standard import (
    Seq,
    extract_gamma0_with_loops,
    is_staircase,
    mirror_seq,
    normalize_seq,
    seq_to_complex,
    simplify_basis,
    top_alexander,
    validate_seq,
)


class ShapeError(ValueError):
    """An input sequence does not match the shape a transform requires."""


class EvalError(ValueError):
    """A knot expression cannot be evaluated."""


class ParseError(ValueError):
    """A knot expression string does not match the grammar."""


# -- expression trees --------------------------------------------------------


@dataclass(frozen=True)
class Unknot:
    def __str__(self) -> str:
        return "U"


@dataclass(frozen=True)
class Torus:
    p: int
    q: int

    def __post_init__(self) -> None:
        if self.p < 2:
            raise ValueError(f"torus knot needs p >= 2, got {self.p}")
        alexander_torus(self.p, self.q)  # validates coprimality

    def __str__(self) -> str:
        return f"T({self.p},{self.q})"


@dataclass(frozen=True)
class Mirror:
    inner: "KnotExpr"

    def __str__(self) -> str:
        inner = str(self.inner)
        if isinstance(self.inner, Sum):
            inner = f"({inner})"
        return f"-{inner}"


@dataclass(frozen=True)
class Sum:
    left: "KnotExpr"
    right: "KnotExpr"

    def __str__(self) -> str:
        return f"{self.left} # {self.right}"


@dataclass(frozen=True)
class Cable2:
    q: int
    inner: "KnotExpr"

    def __post_init__(self) -> None:
        if self.q % 2 == 0:
            raise ValueError(f"(2,q)-cable needs odd q, got {self.q}")

    def __str__(self) -> str:
        return f"C2({self.q}; {self.inner})"


KnotExpr = Union[Unknot, Torus, Mirror, Sum, Cable2]


# -- parser ------------------------------------------------------------------


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, message: str) -> ParseError:
        return ParseError(f"{message} at position {self.pos} in {self.text!r}")

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, token: str) -> None:
        self.skip_ws()
        if not self.text.startswith(token, self.pos):
            raise self.error(f"expected {token!r}")
        self.pos += len(token)

    def integer(self) -> int:
        self.skip_ws()
        start = self.pos
        if self.peek() in "+-":
            self.pos += 1
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == start or not self.text[start:self.pos].lstrip("+-"):
            raise self.error("expected an integer")
        return int(self.text[start:self.pos])

    def expr(self) -> KnotExpr:
        node = self.term()
        while self.peek() == "#":
            self.expect("#")
            node = Sum(node, self.term())
        return node

    def term(self) -> KnotExpr:
        if self.peek() == "-":
            self.expect("-")
            return Mirror(self.atom())
        return self.atom()

    def atom(self) -> KnotExpr:
        ch = self.peek()
        if ch == "(":
            self.expect("(")
            node = self.expr()
            self.expect(")")
            return node
        if self.text.startswith("C2", self.pos):
            self.expect("C2")
            self.expect("(")
            q = self.integer()
            self.expect(";")
            inner = self.expr()
            self.expect(")")
            try:
                return Cable2(q, inner)
            except ValueError as exc:
                raise self.error(str(exc)) from exc
        if ch == "T":
            self.expect("T")
            self.expect("(")
            p = self.integer()
            self.expect(",")
            q = self.integer()
            self.expect(")")
            try:
                return Torus(p, q)
            except ValueError as exc:
                raise self.error(str(exc)) from exc
        if ch == "U":
            self.expect("U")
            return Unknot()
        raise self.error("expected an atom")


def parse_expr(text: str) -> KnotExpr:
    parser = _Parser(text)
    node = parser.expr()
    parser.skip_ws()
    if parser.pos != len(text):
        raise parser.error("trailing input")
    return node


# -- closed-form sequence transforms ----------------------------------------


def staircase_from_alexander(delta: LaurentPoly) -> Seq:
    """Staircase sequence of an L-space knot read off its Alexander polynomial.

    With exponents a_0 > a_1 > ... > a_{2m} and coefficients alternating
    +1, -1, ..., +1, the sequence is the consecutive differences with
    alternating signs: (a_0 - a_1, -(a_1 - a_2), a_2 - a_3, ...).
    """
    if not delta:
        raise ShapeError("zero polynomial is not an L-space Alexander polynomial")
    if not delta.is_symmetric:
        raise ShapeError(f"polynomial {delta} is not symmetric")
    exps = [e for e, _ in reversed(delta.coeffs)]
    coeffs = [c for _, c in reversed(delta.coeffs)]
    if len(coeffs) % 2 == 0:
        raise ShapeError(f"polynomial {delta} has an even number of terms")
    for i, c in enumerate(coeffs):
        if c != (1 if i % 2 == 0 else -1):
            raise ShapeError(f"polynomial {delta} does not alternate +1/-1")
    out = []
    for i in range(len(exps) - 1):
        gap = exps[i] - exps[i + 1]
        out.append(gap if i % 2 == 0 else -gap)
    return validate_seq(out)


def _staircase_pairs(seq: Seq) -> list[tuple[int, int]]:
    if not is_staircase(seq):
        raise ShapeError(f"{list(seq)} is not a staircase sequence")
    return [(seq[i], seq[i + 1]) for i in range(0, len(seq), 2)]


@dataclass(frozen=True)
class CableRegime:
    """Which side of 4g a cable parameter lies on; q = 4g never occurs since
    q is odd and 4g is even."""

    genus: int
    q: int

    def __post_init__(self) -> None:
        if self.q % 2 == 0:
            raise ShapeError(f"cable parameter q must be odd, got {self.q}")

    @property
    def above(self) -> bool:
        return self.q > 4 * self.genus

    @property
    def middle_length(self) -> int:
        return abs(self.q - 4 * self.genus) - 1


def cable2(seq: Seq, genus: int, q: int) -> Seq:
    """Sequence of the (2, q)-cable of an L-space knot with staircase ``seq``.

    Each horizontal step a expands to the alternating block 1, -1, ..., 1 of
    length 2a - 1 and each vertical step b to the single entry 2b - 1; a
    middle run of |q - 4g| - 1 alternating entries separates the two mirrored
    halves, running 1, -1, ... when q > 4g and -1, 1, ... when q < 4g, in
    which case the last vertical step doubles to 2b instead.
    """
    s = validate_seq(seq)
    pairs = _staircase_pairs(s)
    regime = CableRegime(genus, q)
    if genus != top_alexander(s):
        raise ShapeError(f"genus {genus} does not match the staircase {list(s)}")
    half: list[int] = []
    for i, (a, b) in enumerate(pairs):
        for j in range(2 * a - 1):
            half.append(1 if j % 2 == 0 else -1)
        if regime.above or i < len(pairs) - 1:
            half.append(2 * b - 1)
        else:
            half.append(2 * b)
    sign = 1 if regime.above else -1
    middle = [sign, -sign] * (regime.middle_length // 2)
    return validate_seq(half + middle + [-e for e in reversed(half)])


def _central_run_pairs(seq: Seq) -> tuple[int, int]:
    """Length in (H, V) pairs and orientation of the alternating +-1 run
    centered on the midpoint (0 if there is none)."""
    m = len(seq) // 2
    j = 0
    while 2 * (j + 1) <= m:
        lo = m - 2 * (j + 1)
        window = seq[lo : m]
        if abs(window[0]) != 1 or abs(window[1]) != 1:
            break
        if window[0] != -window[1]:
            break
        if j > 0 and window[1] != -seq[lo + 2]:
            break
        j += 1
    if j == 0:
        return 0, 0
    return j, seq[m - 2 * j]


def sum_with_T2(seq: Seq, q: int, sign: int) -> Seq:
    """Sequence of K # T_{2, +-q} for K with a palindromic sequence whose
    horizontal steps all have magnitude one.

    A run of (q-1)/2 alternating unit pairs is inserted at the midpoint,
    oriented 1, -1, ... for the positive torus knot and -1, 1, ... for its
    mirror.  A centered unit run of the opposite orientation in the host
    annihilates inserted pairs one for one, which is what makes the two
    middle runs of a cable and a torus-knot summand collapse.
    """
    s = validate_seq(seq)
    if q <= 2 or q % 2 == 0:
        raise ShapeError(f"torus summand needs odd q > 2, got {q}")
    if sign not in (1, -1):
        raise ShapeError(f"sign must be +1 or -1, got {sign}")
    if not s or len(s) % 4 != 0:
        raise ShapeError(
            f"{list(s)} is not of the palindromic (a_1, b_1, ..., -b_1, -a_1) shape"
        )
    half = s[: len(s) // 2]
    if any(abs(half[i]) != 1 for i in range(0, len(half), 2)):
        raise ShapeError(f"{list(s)} has a horizontal step of magnitude > 1")
    k = (q - 1) // 2
    j, orientation = _central_run_pairs(s)
    m = len(s) // 2
    if j == 0 or orientation == sign:
        middle = [sign, -sign] * k
        return validate_seq(s[:m] + tuple(middle) + s[m:])
    # opposite orientations annihilate pairwise
    if k >= 2 * j:
        middle = [sign, -sign] * (k - 2 * j)
    else:
        middle = [orientation, -orientation] * (2 * j - k)
    return validate_seq(s[: m - 2 * j] + tuple(middle) + s[m + 2 * j :])


def cable_genus(genus: int, p: int, q: int) -> int:
    """Fibered genus of the (p, q)-cable: p g + (p-1)(|q|-1)/2."""
    if p < 2:
        raise ValueError(f"cable needs p >= 2, got {p}")
    if q == 0:
        raise ValueError("cable needs q != 0")
    return p * genus + (p - 1) * (abs(q) - 1) // 2


def tau_cable_formula(tau_k: int, eps_k: int, p: int, q: int) -> int:
    """Tau of the (p, q)-cable from tau and epsilon of the companion."""
    if p < 2:
        raise ValueError(f"cable needs p >= 2, got {p}")
    if eps_k == 1:
        return p * tau_k + (p - 1) * (q - 1) // 2
    if eps_k == 0:
        if q > 0:
            return (p - 1) * (q - 1) // 2
        return (p - 1) * (q + 1) // 2
    raise ValueError("epsilon = -1 companions are unsupported; mirror first")


# -- evaluation --------------------------------------------------------------


FULL_COMPLEX_CAP = 512


@dataclass(frozen=True)
class EvalResult:
    sequence: Seq
    complex: ChainComplex | None
    loop_count: int


def eval_expr(expr: KnotExpr) -> EvalResult:
    """Evaluate an expression to its gamma_0 sequence.

    Torus knots become staircases (negated staircases for q < 0), mirrors
    dualize, sums run the tensor pipeline on standard representatives, and
    cables use the closed form, which requires a staircase operand.  The
    full-ring complex is carried along while it exists and stays small; the
    loop count totals the closed components discarded at every sum.
    """
    if isinstance(expr, Unknot):
        return EvalResult((), seq_to_complex((), Mode.FULL), 0)
    if isinstance(expr, Torus):
        seq = staircase_from_alexander(alexander_torus(expr.p, expr.q))
        if expr.q < 0:
            seq = mirror_seq(seq)
        return EvalResult(seq, seq_to_complex(seq, Mode.FULL), 0)
    if isinstance(expr, Mirror):
        inner = eval_expr(expr.inner)
        cx = inner.complex.dual() if inner.complex is not None else None
        return EvalResult(mirror_seq(inner.sequence), cx, inner.loop_count)
    if isinstance(expr, Cable2):
        inner = eval_expr(expr.inner)
        if not is_staircase(inner.sequence):
            raise EvalError(
                f"closed form inapplicable: {expr.inner} is not an L-space staircase"
            )
        genus = top_alexander(inner.sequence) if inner.sequence else 0
        return EvalResult(cable2(inner.sequence, genus, expr.q), None, inner.loop_count)
    if isinstance(expr, Sum):
        left = eval_expr(expr.left)
        right = eval_expr(expr.right)
        product = seq_to_complex(left.sequence, prefix="l").tensor(
            seq_to_complex(right.sequence, prefix="r")
        )
        seq, loops = extract_gamma0_with_loops(simplify_basis(product.reduce()))
        cx = None
        if (
            left.complex is not None
            and right.complex is not None
            and len(left.complex) * len(right.complex) <= FULL_COMPLEX_CAP
        ):
            cx = left.complex.tensor(right.complex)
        return EvalResult(seq, cx, left.loop_count + right.loop_count + loops)
    raise EvalError(f"unknown expression node {expr!r}")


def gamma0_of(expr: KnotExpr) -> Seq:
    return eval_expr(expr).sequence


def locally_equivalent(e1: KnotExpr, e2: KnotExpr) -> bool:
    """Two expressions are locally equivalent iff their normalized gamma_0
    sequences agree."""
    return normalize_seq(gamma0_of(e1)) == normalize_seq(gamma0_of(e2))


def p_knot(companion: KnotExpr, q1: int, q2: int) -> KnotExpr:
    """The four-summand combination  K_{2,q1} # -K_{2,q2} # T_{2,q2} # -T_{2,q1}."""
    if q1 % 2 == 0 or q2 % 2 == 0:
        raise ValueError("cable parameters must be odd")
    if q1 == q2:
        raise ValueError("cable parameters must be distinct")
    return Sum(
        Sum(
            Sum(Cable2(q1, companion), Mirror(Cable2(q2, companion))),
            Torus(2, q2),
        ),
        Mirror(Torus(2, q1)),
    )


def genus_of(expr: KnotExpr) -> int:
    """Seifert genus, via the torus-knot formula, Schubert additivity under
    connected sum, mirror invariance, and the fibered cable-genus formula."""
    if isinstance(expr, Unknot):
        return 0
    if isinstance(expr, Torus):
        return (expr.p - 1) * (abs(expr.q) - 1) // 2
    if isinstance(expr, Mirror):
        return genus_of(expr.inner)
    if isinstance(expr, Sum):
        return genus_of(expr.left) + genus_of(expr.right)
    if isinstance(expr, Cable2):
        return cable_genus(genus_of(expr.inner), 2, expr.q)
    raise EvalError(f"unknown expression node {expr!r}")
