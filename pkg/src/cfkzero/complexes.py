"""Finitely generated free bigraded chain complexes over F_2[U,V] and its
UV = 0 quotient.

Conventions, fixed once for the whole package:

* U has bidegree (-2, 0) and V has (0, -2); the differential drops both
  gradings by 1.  Concretely, an arrow src -> tgt with coefficient U^a V^b
  satisfies  grU(tgt) - 2a = grU(src) - 1  and  grV(tgt) - 2b = grV(src) - 1.
* The Alexander grading of a generator is A = (grU - grV) / 2, which the
  differential preserves.

Because every complex here is graded, each differential entry is a single
monomial; the reduction and homology routines below exploit that.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .algebra import Mode, ModeMismatchError, RingElem, monomial_str_parse


class InvalidComplexError(ValueError):
    """A chain complex failed validation."""


class KnotlikeError(ValueError):
    """A complex does not have the homological shape of a knot complex."""


@dataclass(frozen=True)
class Generator:
    ident: str
    gr_u: int
    gr_v: int

    @property
    def alexander(self) -> int:
        if (self.gr_u - self.gr_v) % 2 != 0:
            raise InvalidComplexError(
                f"generator {self.ident} has non-integral Alexander grading"
            )
        return (self.gr_u - self.gr_v) // 2


@dataclass(frozen=True)
class ComplexViolation:
    kind: str  # "parity", "grading" or "dsquared"
    witness: str

    def __str__(self) -> str:
        return f"{self.kind}: {self.witness}"


def _pair_id(a: str, b: str) -> str:
    return f"({a}|{b})"


class ChainComplex:
    """A free bigraded complex with a sparse differential.

    ``diff`` maps (target id, source id) to a ring element, so the column of
    a generator g lists the arrows of the boundary of g.
    """

    def __init__(
        self,
        gens: Sequence[Generator],
        diff: Mapping[tuple[str, str], RingElem],
        mode: Mode,
    ):
        self.gens: tuple[Generator, ...] = tuple(gens)
        self.mode = mode
        by_id: dict[str, Generator] = {}
        for g in self.gens:
            if g.ident in by_id:
                raise InvalidComplexError(f"duplicate generator id {g.ident!r}")
            by_id[g.ident] = g
        self._by_id = by_id
        clean: dict[tuple[str, str], RingElem] = {}
        for (tgt, src), elem in diff.items():
            if tgt not in by_id or src not in by_id:
                raise InvalidComplexError(f"arrow {src!r} -> {tgt!r} references unknown id")
            if elem.mode is not mode:
                raise ModeMismatchError(f"entry {src!r} -> {tgt!r} has wrong mode")
            if elem:
                clean[(tgt, src)] = elem
        self.diff = clean

    # -- basic access -------------------------------------------------------

    def generator(self, ident: str) -> Generator:
        return self._by_id[ident]

    def ids(self) -> list[str]:
        return [g.ident for g in self.gens]

    def entry(self, tgt: str, src: str) -> RingElem:
        return self.diff.get((tgt, src), RingElem.zero(self.mode))

    def arrows_from(self, src: str) -> dict[str, RingElem]:
        return {t: e for (t, s), e in self.diff.items() if s == src}

    def arrows_into(self, tgt: str) -> dict[str, RingElem]:
        return {s: e for (t, s), e in self.diff.items() if t == tgt}

    def __len__(self) -> int:
        return len(self.gens)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ChainComplex):
            return NotImplemented
        return (
            self.gens == other.gens
            and self.diff == other.diff
            and self.mode is other.mode
        )

    # -- validation ---------------------------------------------------------

    def validate(self) -> ComplexViolation | None:
        """Check the grading constraint and d^2 = 0; report the first failure."""
        for g in self.gens:
            if (g.gr_u - g.gr_v) % 2 != 0:
                return ComplexViolation("parity", f"generator {g.ident} grades ({g.gr_u},{g.gr_v})")
        for (tgt, src) in sorted(self.diff):
            elem = self.diff[(tgt, src)]
            gt, gs = self._by_id[tgt], self._by_id[src]
            for a, b in sorted(elem.terms):
                if gt.gr_u - 2 * a != gs.gr_u - 1 or gt.gr_v - 2 * b != gs.gr_v - 1:
                    return ComplexViolation(
                        "grading", f"{src} -> {tgt} : U^{a} V^{b}"
                    )
        # d^2 sums, accumulated per (final target, source)
        by_source: dict[str, list[tuple[str, RingElem]]] = {}
        for (tgt, src), elem in self.diff.items():
            by_source.setdefault(src, []).append((tgt, elem))
        square: dict[tuple[str, str], RingElem] = {}
        for (mid, src), first in self.diff.items():
            for tgt, second in by_source.get(mid, ()):
                key = (tgt, src)
                acc = square.get(key, RingElem.zero(self.mode))
                square[key] = acc + second * first
        for key in sorted(square):
            if square[key]:
                tgt, src = key
                return ComplexViolation("dsquared", f"d^2({src}) hits {tgt} with {square[key]}")
        return None

    def require_valid(self) -> "ChainComplex":
        violation = self.validate()
        if violation is not None:
            raise InvalidComplexError(str(violation))
        return self

    # -- constructions ------------------------------------------------------

    def tensor(self, other: "ChainComplex") -> "ChainComplex":
        """Tensor product over the ground ring; gradings add, no signs in char 2."""
        if self.mode is not other.mode:
            raise ModeMismatchError("tensor factors must share a coefficient mode")
        gens = [
            Generator(_pair_id(x.ident, y.ident), x.gr_u + y.gr_u, x.gr_v + y.gr_v)
            for x in self.gens
            for y in other.gens
        ]
        diff: dict[tuple[str, str], RingElem] = {}
        for (t, s), elem in self.diff.items():
            for y in other.gens:
                diff[(_pair_id(t, y.ident), _pair_id(s, y.ident))] = elem
        for (t, s), elem in other.diff.items():
            for x in self.gens:
                key = (_pair_id(x.ident, t), _pair_id(x.ident, s))
                acc = diff.get(key, RingElem.zero(self.mode))
                diff[key] = acc + elem
        return ChainComplex(gens, diff, self.mode)

    def dual(self) -> "ChainComplex":
        """Mirror with reversed orientation: transpose the differential and
        negate both gradings.  Applying it twice gives back the original."""
        gens = [Generator(g.ident, -g.gr_u, -g.gr_v) for g in self.gens]
        diff = {(s, t): e for (t, s), e in self.diff.items()}
        return ChainComplex(gens, diff, self.mode)

    def quotient_uv(self) -> "ChainComplex":
        """Pass to F_2[U,V]/(UV): every mixed monomial in the differential
        dies.  Idempotent: a complex already over the quotient is returned
        unchanged."""
        if self.mode is Mode.UVZERO:
            return self
        diff = {key: e.to_quotient() for key, e in self.diff.items()}
        return ChainComplex(self.gens, diff, Mode.UVZERO)

    # -- reduction ----------------------------------------------------------

    def reduce(self) -> "ChainComplex":
        """Cancel unit arrows until none remain.

        Each step removes a pair of generators joined by a U^0 V^0 arrow and
        applies the zig-zag correction, producing a chain homotopy equivalent
        complex.  The unit arrow chosen is always the lexicographically first
        by (source id, target id), so the result is reproducible.
        """
        mat = _MonoMatrix.from_complex(self)
        removed: set[str] = set()
        while True:
            best: tuple[str, str] | None = None
            for (tgt, src), (a, b) in mat.items():
                if a == 0 and b == 0 and (best is None or (src, tgt) < best):
                    best = (src, tgt)
            if best is None:
                break
            src, tgt = best
            mat.cancel(tgt, src)
            removed.update((tgt, src))
        gens = [g for g in self.gens if g.ident not in removed]
        return ChainComplex(gens, mat.to_diff(self.mode), self.mode)

    def vertical_homology(self) -> tuple[int, tuple[int, ...]]:
        """Set V = 0 and take homology over F_2[U].

        Returns (Alexander grading of the free generator, ascending torsion
        orders).  The complex must be knot-like: the free part has rank one.
        """
        if self.mode is not Mode.UVZERO:
            raise ModeMismatchError("vertical homology expects a UV = 0 complex")
        mat = _MonoMatrix(Mode.UVZERO)
        for (tgt, src), elem in self.diff.items():
            for a, b in elem.terms:
                if b == 0:
                    if a == 0:
                        raise InvalidComplexError("vertical homology needs a reduced complex")
                    mat.add(tgt, src, a, 0)
        torsion: list[int] = []
        survivors = {g.ident for g in self.gens}
        while True:
            best: tuple[int, str, str] | None = None
            for (tgt, src), (a, _) in mat.items():
                key = (a, src, tgt)
                if best is None or key < best:
                    best = key
            if best is None:
                break
            k, src, tgt = best
            mat.cancel(tgt, src, divide_u=k)
            torsion.append(k)
            survivors.discard(src)
            survivors.discard(tgt)
        if len(survivors) != 1:
            raise KnotlikeError(
                f"free part of vertical homology has rank {len(survivors)}, expected 1"
            )
        free = self._by_id[next(iter(survivors))]
        return free.alexander, tuple(sorted(torsion))

    def max_alexander(self) -> int:
        if not self.gens:
            raise KnotlikeError("empty complex has no Alexander gradings")
        return max(g.alexander for g in self.gens)

    # -- serialization ------------------------------------------------------

    def to_text(self) -> str:
        lines = [f"{g.ident} {g.gr_u} {g.gr_v}" for g in self.gens]
        for (tgt, src) in sorted(self.diff, key=lambda k: (k[1], k[0])):
            lines.append(f"{src} -> {tgt} : {self.diff[(tgt, src)]}")
        return "\n".join(lines)

    @classmethod
    def from_text(cls, text: str, mode: Mode) -> "ChainComplex":
        gens: list[Generator] = []
        diff: dict[tuple[str, str], RingElem] = {}
        for raw in text.splitlines():
            line = raw.strip()
            if not line:
                continue
            if "->" in line:
                head, _, coeff = line.partition(":")
                src, _, tgt = head.partition("->")
                diff[(tgt.strip(), src.strip())] = monomial_str_parse(coeff, mode)
            else:
                ident, gu, gv = line.split()
                gens.append(Generator(ident, int(gu), int(gv)))
        return cls(gens, diff, mode)

    def __str__(self) -> str:
        return self.to_text()


class _MonoMatrix:
    """Sparse differential with single-monomial entries, for reductions.

    Graded complexes only ever have one monomial per entry, and every graded
    operation preserves that, so entries are bare (upow, vpow) pairs.  Adding
    a monomial to an equal one cancels (char 2); adding a different one to an
    occupied slot would break the grading and raises.

    The matrix keeps a running XOR hash of its entries and the set of
    generators meeting more than one arrow of some type and direction, so the
    basis-simplification search can test states and find conflicts cheaply.
    """

    def __init__(self, mode: Mode):
        self.mode = mode
        self.rows: dict[str, dict[str, tuple[int, int]]] = {}
        self.cols: dict[str, dict[str, tuple[int, int]]] = {}
        self.zhash = 0
        self.count = 0
        # per generator: [H-in, V-in, H-out, V-out] arrow counts
        self.degrees: dict[str, list[int]] = {}
        self.conflicted: set[str] = set()

    @classmethod
    def from_complex(cls, cx: ChainComplex) -> "_MonoMatrix":
        mat = cls(cx.mode)
        for (tgt, src), elem in cx.diff.items():
            a, b = elem.sole_term()
            mat.add(tgt, src, a, b)
        return mat

    def copy(self) -> "_MonoMatrix":
        out = _MonoMatrix(self.mode)
        out.rows = {t: dict(row) for t, row in self.rows.items() if row}
        out.cols = {s: dict(col) for s, col in self.cols.items() if col}
        out.zhash = self.zhash
        out.count = self.count
        out.degrees = {g: list(d) for g, d in self.degrees.items()}
        out.conflicted = set(self.conflicted)
        return out

    def items(self) -> Iterable[tuple[tuple[str, str], tuple[int, int]]]:
        for tgt, row in self.rows.items():
            for src, mono in row.items():
                yield (tgt, src), mono

    def entry(self, tgt: str, src: str) -> tuple[int, int] | None:
        return self.rows.get(tgt, {}).get(src)

    def _bump(self, gen: str, slot: int, amount: int) -> None:
        counts = self.degrees.get(gen)
        if counts is None:
            counts = self.degrees[gen] = [0, 0, 0, 0]
        counts[slot] += amount
        if counts[slot] > 1:
            self.conflicted.add(gen)
        elif gen in self.conflicted and not (
            counts[0] > 1 or counts[1] > 1 or counts[2] > 1 or counts[3] > 1
        ):
            self.conflicted.discard(gen)

    def _track(self, tgt: str, src: str, mono: tuple[int, int], amount: int) -> None:
        self.zhash ^= hash((tgt, src, mono))
        self.count += amount
        kind = 0 if mono[0] > 0 else 1
        self._bump(tgt, kind, amount)
        self._bump(src, 2 + kind, amount)

    def add(self, tgt: str, src: str, a: int, b: int) -> None:
        if self.mode is Mode.UVZERO and a > 0 and b > 0:
            return
        row = self.rows.setdefault(tgt, {})
        cur = row.get(src)
        if cur is None:
            row[src] = (a, b)
            self.cols.setdefault(src, {})[tgt] = (a, b)
            self._track(tgt, src, (a, b), +1)
            return
        if cur != (a, b):
            raise InvalidComplexError(
                f"entry {src} -> {tgt} mixes degrees U^{cur[0]}V^{cur[1]} and U^{a}V^{b}"
            )
        del row[src]
        del self.cols[src][tgt]
        self._track(tgt, src, cur, -1)

    def cancel(self, tgt: str, src: str, divide_u: int = 0) -> None:
        """Remove the pair (tgt, src) along the arrow between them, adding the
        zig-zag corrections d(w -> tgt) * d(src -> z) / U^divide_u."""
        ins = [(w, m) for w, m in self.rows.get(tgt, {}).items() if w != src]
        outs = [(z, m) for z, m in self.cols.get(src, {}).items() if z != tgt]
        self.drop_gen(tgt)
        self.drop_gen(src)
        for w, (a1, b1) in ins:
            for z, (a2, b2) in outs:
                a = a1 + a2 - divide_u
                if a < 0:
                    raise InvalidComplexError("cancellation pivot was not minimal")
                self.add(z, w, a, b1 + b2)

    def drop_gen(self, ident: str) -> None:
        for src, mono in list(self.rows.get(ident, {}).items()):
            del self.cols[src][ident]
            self._track(ident, src, mono, -1)
        self.rows.pop(ident, None)
        for tgt, mono in list(self.cols.get(ident, {}).items()):
            del self.rows[tgt][ident]
            self._track(tgt, ident, mono, -1)
        self.cols.pop(ident, None)

    def to_diff(self, mode: Mode) -> dict[tuple[str, str], RingElem]:
        return {
            (tgt, src): RingElem.monomial(a, b, mode)
            for (tgt, src), (a, b) in self.items()
        }


@dataclass
class Endomorphism:
    """A matrix of ring elements over a complex's generators.

    ``shift`` declares the bidegree; when ``skew`` is set the map exchanges
    the two gradings and conjugates coefficients by the U <-> V swap, which is
    how the involution acts.
    """

    cx: ChainComplex
    entries: dict[tuple[str, str], RingElem] = field(default_factory=dict)
    shift: tuple[int, int] = (0, 0)
    skew: bool = False

    def __post_init__(self) -> None:
        self.entries = {k: v for k, v in self.entries.items() if v}

    def twist(self, elem: RingElem) -> RingElem:
        return elem.swap_uv() if self.skew else elem

    def entry(self, tgt: str, src: str) -> RingElem:
        return self.entries.get((tgt, src), RingElem.zero(self.cx.mode))

    def apply_gen(self, src: str) -> dict[str, RingElem]:
        out: dict[str, RingElem] = {}
        for (tgt, s), elem in self.entries.items():
            if s == src:
                out[tgt] = out.get(tgt, RingElem.zero(self.cx.mode)) + elem
        return {t: e for t, e in out.items() if e}

    def apply(self, combo: Mapping[str, RingElem]) -> dict[str, RingElem]:
        """Apply to a coefficient combination of generators."""
        out: dict[str, RingElem] = {}
        for src, coeff in combo.items():
            twisted = self.twist(coeff)
            for (tgt, s), elem in self.entries.items():
                if s == src:
                    acc = out.get(tgt, RingElem.zero(self.cx.mode))
                    out[tgt] = acc + elem * twisted
        return {t: e for t, e in out.items() if e}

    def compose(self, other: "Endomorphism") -> "Endomorphism":
        """self after other."""
        entries: dict[tuple[str, str], RingElem] = {}
        by_src: dict[str, list[tuple[str, RingElem]]] = {}
        for (tgt, src), elem in self.entries.items():
            by_src.setdefault(src, []).append((tgt, elem))
        for (mid, src), inner in other.entries.items():
            twisted = self.twist(inner)
            for tgt, outer in by_src.get(mid, ()):
                key = (tgt, src)
                acc = entries.get(key, RingElem.zero(self.cx.mode))
                entries[key] = acc + outer * twisted
        if self.skew:
            os = (other.shift[1], other.shift[0])
        else:
            os = other.shift
        shift = (self.shift[0] + os[0], self.shift[1] + os[1])
        return Endomorphism(self.cx, entries, shift, self.skew != other.skew)

    def __add__(self, other: "Endomorphism") -> "Endomorphism":
        if self.skew != other.skew or self.shift != other.shift:
            raise ValueError("can only add endomorphisms of the same type and shift")
        entries = dict(self.entries)
        for key, elem in other.entries.items():
            acc = entries.get(key, RingElem.zero(self.cx.mode))
            entries[key] = acc + elem
        return Endomorphism(self.cx, entries, self.shift, self.skew)

    def is_zero(self) -> bool:
        return not self.entries

    def is_chain_map(self) -> bool:
        # the differential's shift (-1, -1) is swap-invariant, so both
        # composites carry identical bookkeeping and can be added
        d = diff_endomorphism(self.cx)
        return (d.compose(self) + self.compose(d)).is_zero()

    def respects_grading(self) -> bool:
        by_id = {g.ident: g for g in self.cx.gens}
        du, dv = self.shift
        for (tgt, src), elem in self.entries.items():
            gt, gs = by_id[tgt], by_id[src]
            src_u, src_v = (gs.gr_v, gs.gr_u) if self.skew else (gs.gr_u, gs.gr_v)
            for a, b in elem.terms:
                if gt.gr_u - 2 * a != src_u + du or gt.gr_v - 2 * b != src_v + dv:
                    return False
        return True


def diff_endomorphism(cx: ChainComplex) -> Endomorphism:
    """The differential itself, as an endomorphism of bidegree (-1, -1)."""
    return Endomorphism(cx, dict(cx.diff), (-1, -1), False)
