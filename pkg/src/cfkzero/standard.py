"""The parameter-sequence calculus for standard complexes.

A standard complex on generators z_0 ... z_n is encoded by a finite sequence
of nonzero integers.  Entries at odd positions (1st, 3rd, ...) describe
horizontal (U-power) arrows, entries at even positions vertical (V-power)
arrows; the magnitude is the arrow power and the sign records the traversal
direction: positive means the walk from z_{i-1} to z_i runs against the
arrow, negative means it runs with the arrow.

The Alexander walk assigns ΔA = -entry to horizontal steps and ΔA = +entry
to vertical steps; endpoint values are antisymmetric, which pins the start
at A = -(walk sum)/2.  That start value is tau, and the walk maximum is the
top Alexander grading of gamma_0.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Iterable, Sequence

from .algebra import Mode, RingElem
from .complexes import ChainComplex, Generator, InvalidComplexError, KnotlikeError, _MonoMatrix

Seq = tuple[int, ...]

SIMPLIFY_PASS_CAP = 10_000


class SequenceError(ValueError):
    """A list of integers is not a valid parameter sequence."""


class SimplifyError(ValueError):
    """Basis simplification did not reach a fixpoint within the pass cap."""


def validate_seq(entries: Iterable[int]) -> Seq:
    seq = tuple(int(e) for e in entries)
    if any(e == 0 for e in seq):
        raise SequenceError(f"zero entry in sequence {list(seq)}")
    if len(seq) % 2 != 0:
        raise SequenceError(f"sequence length must be even, got {list(seq)}")
    if tuple(-e for e in reversed(seq)) != seq:
        raise SequenceError(f"sequence {list(seq)} is not reverse-negate symmetric")
    if sum(_delta_a(seq)) % 2 != 0:
        raise SequenceError(f"sequence {list(seq)} has an odd Alexander walk sum")
    return seq


def _delta_a(seq: Seq) -> list[int]:
    # odd positions horizontal (ΔA = -entry), even positions vertical (+entry)
    return [-e if i % 2 == 0 else e for i, e in enumerate(seq)]


def walk_values(seq: Seq) -> list[int]:
    """Alexander gradings A(z_0), ..., A(z_n) along the sequence."""
    deltas = _delta_a(seq)
    start = -sum(deltas) // 2
    values = [start]
    for d in deltas:
        values.append(values[-1] + d)
    return values


def tau(seq: Sequence[int]) -> int:
    """Alexander value at the start of the gamma_0 walk."""
    s = validate_seq(seq)
    return walk_values(s)[0]


def top_alexander(seq: Sequence[int]) -> int:
    s = validate_seq(seq)
    return max(walk_values(s))


def epsilon(seq: Sequence[int]) -> int:
    """Sign of the first entry; 0 for the unknot class."""
    s = validate_seq(seq)
    if not s:
        return 0
    return 1 if s[0] > 0 else -1


def normalize_seq(seq: Sequence[int]) -> Seq:
    """Canonical representative; the reverse-negate symmetry already fixes it."""
    return validate_seq(seq)


def mirror_seq(seq: Sequence[int]) -> Seq:
    """Sequence of the mirror knot: entrywise negation."""
    return validate_seq(tuple(-e for e in validate_seq(seq)))


@dataclass(frozen=True)
class SharpnessReport:
    genus: int
    gamma0_top_a: int

    @property
    def sharp(self) -> bool:
        return self.genus == self.gamma0_top_a


def sharpness(genus: int, seq: Sequence[int]) -> SharpnessReport:
    if genus < 0:
        raise ValueError("genus must be nonnegative")
    return SharpnessReport(genus, top_alexander(seq))


def is_staircase(seq: Sequence[int]) -> bool:
    """True for L-space staircase shapes: signs strictly alternate +, -, +, ..."""
    try:
        s = validate_seq(seq)
    except SequenceError:
        return False
    return all((e > 0) == (i % 2 == 0) for i, e in enumerate(s))


def seq_to_complex(seq: Sequence[int], mode: Mode = Mode.UVZERO, prefix: str = "z") -> ChainComplex:
    """Build the standard complex of a sequence.

    Step i installs an arrow of power |entry| between z_{i-1} and z_i, aimed
    by the sign convention; gradings follow the Alexander walk with
    grU(z_0) = 0.  Over the full ring only staircase-shaped sequences give a
    complex, so the result is validated either way.
    """
    s = validate_seq(seq)
    a_values = walk_values(s)
    gr_u = [0]
    for i, e in enumerate(s, start=1):
        power = abs(e)
        if i % 2 == 1:  # horizontal
            gr_u.append(gr_u[-1] + (-2 * power + 1 if e > 0 else 2 * power - 1))
        else:  # vertical
            gr_u.append(gr_u[-1] + (1 if e > 0 else -1))
    gens = [
        Generator(f"{prefix}{i}", gu, gu - 2 * a)
        for i, (gu, a) in enumerate(zip(gr_u, a_values))
    ]
    diff: dict[tuple[str, str], RingElem] = {}
    for i, e in enumerate(s, start=1):
        power = abs(e)
        upow, vpow = (power, 0) if i % 2 == 1 else (0, power)
        elem = RingElem.monomial(upow, vpow, mode)
        prev, cur = f"{prefix}{i-1}", f"{prefix}{i}"
        tgt, src = (prev, cur) if e > 0 else (cur, prev)
        diff[(tgt, src)] = elem
    cx = ChainComplex(gens, diff, mode)
    violation = cx.validate()
    if violation is not None:
        raise SequenceError(f"sequence {list(s)} gives no {mode.value} complex: {violation}")
    return cx


# -- basis simplification ---------------------------------------------------


def simplify_basis(cx: ChainComplex, pass_cap: int = SIMPLIFY_PASS_CAP) -> ChainComplex:
    """Filtered change of basis until every generator meets at most one
    incoming and one outgoing arrow of each type.

    Conflicts are resolved by merging toward the shorter arrow: two arrows
    U^{k1}, U^{k2} out of one generator (k1 <= k2) are combined by replacing
    the shorter target y1 with y1 + U^{k2-k1} y2, deleting the longer arrow;
    incoming conflicts and vertical arrows mirror this.  Equal-power merges
    work in both directions and can shuffle the other arrow type, so the
    scheduler greedily picks the candidate creating the fewest new entries
    and restarts with a reseeded preference order if the state ever repeats.

    The cap bounds total merges.  A complex whose closed components carry a
    nontrivial local system (an indecomposable band of multiplicity two or
    more) has no basis of the target shape at all, and such inputs fail
    loudly; knot complexes built here never produce them.
    """
    if cx.mode is not Mode.UVZERO:
        raise InvalidComplexError("simplify_basis expects a UV = 0 complex")
    base = _MonoMatrix.from_complex(cx)
    for (tgt, src), (a, b) in base.items():
        if a == 0 and b == 0:
            raise InvalidComplexError("simplify_basis expects a reduced complex")
    budget = [pass_cap]
    mat = _simplify_matrix(base, budget)
    out = ChainComplex(cx.gens, mat.to_diff(cx.mode), cx.mode)
    return out.require_valid()


_SIMPLIFY_ATTEMPTS = 16

Move = tuple[str, str, int, bool]  # kept, absorbed, delta, horizontal


def _simplify_matrix(mat: _MonoMatrix, budget: list[int]) -> _MonoMatrix:
    """Search for a conflict-free basis, one connected component at a time.

    Merges never join arrow-graph components, so each component is searched
    in isolation; whenever cancellations split a component further, the
    search recurses on the pieces.  Within one component the walk never
    revisits a state, and on a dead end it restarts with a reshuffled
    preference order.
    """
    if not mat.conflicted:
        return mat
    parts = _components(mat)
    if len(parts) > 1:
        out = _MonoMatrix(mat.mode)
        for part in sorted(parts, key=lambda p: (len(p), min(p))):
            sub = _simplify_matrix(_restrict(mat, part), budget)
            for (tgt, src), (a, b) in sub.items():
                out.add(tgt, src, a, b)
        return out
    for attempt in range(_SIMPLIFY_ATTEMPTS):
        work = mat.copy()
        rng = random.Random(attempt) if attempt else None
        seen = {work.zhash}
        shrunk = 0
        low_water = work.count
        while budget[0] > 0:
            if not work.conflicted:
                return work
            if work.count < low_water:
                shrunk += low_water - work.count
                low_water = work.count
                # cancellations are what disconnect pieces; checking after a
                # batch of them keeps the component scan off the hot path
                if shrunk >= 16:
                    shrunk = 0
                    if len(_components(work)) > 1:
                        return _simplify_matrix(work, budget)
            if not _step(work, seen, rng, budget):
                break
        if budget[0] <= 0:
            break
    raise SimplifyError(
        "no simplified basis within the merge cap; the input is not knot-like "
        "or a closed component carries a nontrivial local system"
    )


def _step(work: _MonoMatrix, seen: set[int], rng: random.Random | None, budget: list[int]) -> bool:
    """Apply one merge leading to an unseen state; False on a dead end.

    Entry-reducing candidates are taken as soon as they are found; the rest
    are retried in order of the net entries they would create.
    """

    def attempt(move: Move) -> bool:
        # a char-2 basis change is an involution, so a rejected candidate is
        # undone by applying it again
        _basis_change(work, *move)
        budget[0] -= 1
        if work.zhash not in seen:
            seen.add(work.zhash)
            return True
        _basis_change(work, *move)
        return False

    gens = sorted(work.conflicted)
    if rng is not None:
        rng.shuffle(gens)
    deferred: list[tuple[int, int, Move]] = []
    considered: set[Move] = set()
    for gen in gens:
        moves = _moves_at(work, gen)
        if rng is not None:
            rng.shuffle(moves)
        for move in moves:
            if move in considered:
                continue
            considered.add(move)
            score = _move_score(work, move)
            if score <= -1:
                if budget[0] <= 0:
                    return False
                if attempt(move):
                    return True
            else:
                deferred.append((score, len(deferred), move))
    deferred.sort()
    for _, _, move in deferred:
        if budget[0] <= 0:
            return False
        if attempt(move):
            return True
    return False


def _components(mat: _MonoMatrix) -> list[set[str]]:
    """Connected components of the arrow graph (isolated generators omitted)."""
    parent: dict[str, str] = {}

    def find(x: str) -> str:
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    for (tgt, src), _ in mat.items():
        parent.setdefault(tgt, tgt)
        parent.setdefault(src, src)
        parent[find(tgt)] = find(src)
    parts: dict[str, set[str]] = {}
    for g in parent:
        parts.setdefault(find(g), set()).add(g)
    return list(parts.values())


def _restrict(mat: _MonoMatrix, gens: set[str]) -> _MonoMatrix:
    sub = _MonoMatrix(mat.mode)
    for (tgt, src), (a, b) in mat.items():
        if tgt in gens:
            sub.add(tgt, src, a, b)
    return sub


def _is_type(mono: tuple[int, int], horizontal: bool) -> bool:
    a, b = mono
    return a > 0 if horizontal else b > 0


def _power(mono: tuple[int, int]) -> int:
    return mono[0] or mono[1]


def _moves_at(mat: _MonoMatrix, gen: str) -> list[Move]:
    """Candidate merges for the conflicts at one generator.

    An outgoing conflict merges two targets toward the shorter arrow, an
    incoming one two sources; equal powers allow both orientations.
    """
    moves: list[Move] = []
    for horizontal in (True, False):
        arrows = sorted(
            (_power(m), tgt) for tgt, m in mat.cols.get(gen, {}).items()
            if _is_type(m, horizontal)
        )
        for (k1, y1), (k2, y2) in itertools.combinations(arrows, 2):
            moves.append((y1, y2, k2 - k1, horizontal))
            if k1 == k2:
                moves.append((y2, y1, 0, horizontal))
        arrows = sorted(
            (_power(m), src) for src, m in mat.rows.get(gen, {}).items()
            if _is_type(m, horizontal)
        )
        for (k1, y1), (k2, y2) in itertools.combinations(arrows, 2):
            moves.append((y2, y1, k2 - k1, horizontal))
            if k1 == k2:
                moves.append((y1, y2, 0, horizontal))
    return moves


def _conflict_moves(mat: _MonoMatrix) -> list[Move]:
    """All candidate merges, for every conflicted generator."""
    moves: list[Move] = []
    for gen in sorted(mat.conflicted):
        moves.extend(_moves_at(mat, gen))
    return moves


def _move_score(mat: _MonoMatrix, move: Move) -> int:
    """Net entries created by a merge; cancellations count negative."""
    kept, absorbed, delta, horizontal = move
    a_shift, b_shift = (delta, 0) if horizontal else (0, delta)
    net = 0
    for tgt, (a, b) in mat.cols.get(absorbed, {}).items():
        na, nb = a + a_shift, b + b_shift
        if mat.mode is Mode.UVZERO and na > 0 and nb > 0:
            continue
        net += -1 if mat.entry(tgt, kept) == (na, nb) else 1
    for src, (a, b) in mat.rows.get(kept, {}).items():
        na, nb = a + a_shift, b + b_shift
        if mat.mode is Mode.UVZERO and na > 0 and nb > 0:
            continue
        net += -1 if mat.entry(absorbed, src) == (na, nb) else 1
    return net


def _basis_change(mat: _MonoMatrix, kept: str, absorbed: str, delta: int, horizontal: bool) -> None:
    """Replace the basis element `kept` by kept + X^delta * absorbed.

    The boundary of the new element gains X^delta times the boundary of
    `absorbed`; arrows into `kept` spill onto `absorbed` with the power
    raised by delta.  Mixed monomials die in the quotient, and in a graded
    complex no arrow joins `kept` to `absorbed`, so the two updates commute.
    """
    a_shift, b_shift = (delta, 0) if horizontal else (0, delta)
    for tgt, (a, b) in list(mat.cols.get(absorbed, {}).items()):
        mat.add(tgt, kept, a + a_shift, b + b_shift)
    for src, (a, b) in list(mat.rows.get(kept, {}).items()):
        mat.add(absorbed, src, a + a_shift, b + b_shift)


# -- gamma_0 extraction -----------------------------------------------------


def split_components(cx: ChainComplex) -> tuple[list[list[str]], int]:
    """Split a simplified complex into its alternating paths and cycles.

    Returns (open paths as ordered id lists, number of closed loops).
    """
    incidence: dict[str, dict[str, tuple[str, int, bool]]] = {g.ident: {} for g in cx.gens}
    for (tgt, src), elem in cx.diff.items():
        a, b = elem.sole_term()
        kind = "H" if a > 0 else "V"
        power = a or b
        for here, other, outgoing in ((src, tgt, True), (tgt, src, False)):
            if kind in incidence[here]:
                raise SimplifyError(f"generator {here} meets two {kind} arrows; not simplified")
            incidence[here][kind] = (other, power, outgoing)
    seen: set[str] = set()
    paths: list[list[str]] = []
    loops = 0
    for g in cx.gens:
        if g.ident in seen:
            continue
        component, is_cycle = _walk_component(g.ident, incidence)
        seen.update(component)
        if is_cycle:
            loops += 1
        else:
            paths.append(component)
    return paths, loops


def _walk_component(start: str, incidence: dict[str, dict[str, tuple[str, int, bool]]]):
    # walk back to an endpoint (or all the way around a cycle), then forward
    order = ["H", "V"]
    here, came_by = start, None
    steps = 0
    while True:
        kinds = [k for k in order if k in incidence[here] and k != came_by]
        if not kinds:
            break
        nxt, _, _ = incidence[here][kinds[0]]
        came_by = kinds[0]
        here = nxt
        steps += 1
        if here == start and steps > 1:
            return _collect(start, incidence), True
    return _collect(here, incidence), False


def _collect(start: str, incidence) -> list[str]:
    out = [start]
    came_by = None
    here = start
    while True:
        kinds = [k for k in ("H", "V") if k in incidence[here] and k != came_by]
        if not kinds:
            return out
        nxt, _, _ = incidence[here][kinds[0]]
        if nxt == start:
            return out
        out.append(nxt)
        came_by = kinds[0]
        here = nxt


def extract_gamma0(cx: ChainComplex) -> Seq:
    seq, _ = extract_gamma0_with_loops(cx)
    return seq


def extract_gamma0_with_loops(cx: ChainComplex) -> tuple[Seq, int]:
    """Read the parameter sequence off the unique open path of a simplified
    complex, starting from the endpoint with no vertical arrow; positive
    entries record steps against an arrow, negative ones steps with it."""
    paths, loops = split_components(cx)
    if len(paths) != 1:
        raise KnotlikeError(f"expected one open path, found {len(paths)}")
    path = paths[0]
    incidence: dict[str, dict[str, tuple[str, int, bool]]] = {g.ident: {} for g in cx.gens}
    for (tgt, src), elem in cx.diff.items():
        a, b = elem.sole_term()
        kind = "H" if a > 0 else "V"
        power = a or b
        incidence[src][kind] = (tgt, power, True)
        incidence[tgt][kind] = (src, power, False)
    ends = [path[0], path[-1]] if len(path) > 1 else [path[0]]
    starts = [e for e in ends if "V" not in incidence[e]]
    if not starts:
        raise KnotlikeError("open path has no endpoint free of vertical arrows")
    here = min(starts)
    entries: list[int] = []
    came_by = None
    for _ in range(len(path) - 1):
        kinds = [k for k in ("H", "V") if k in incidence[here] and k != came_by]
        other, power, outgoing = incidence[here][kinds[0]]
        entries.append(-power if outgoing else power)
        came_by = kinds[0]
        here = other
    try:
        return validate_seq(entries), loops
    except SequenceError as exc:
        raise KnotlikeError(f"extracted walk is not a knot sequence: {exc}") from exc
