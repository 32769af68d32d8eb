"""Exact linear algebra over the two-element field.

Vectors and matrices live on explicit ordered bases of hashable labels
(usually generators, i.e. sorted tuples of intersection point names), so
that maps between different chain groups cannot be mixed up silently.
Rows are packed into Python ints for elimination.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Hashable, Iterable, Sequence


class BasisMismatch(ValueError):
    pass


class NotAComplex(ValueError):
    pass


@dataclass(frozen=True)
class F2Vector:
    basis: tuple
    support: frozenset = frozenset()

    def __post_init__(self):
        for i in self.support:
            if not 0 <= i < len(self.basis):
                raise IndexError(f"support index {i} out of range")

    @classmethod
    def from_labels(cls, basis: Sequence[Hashable], labels: Iterable[Hashable]) -> "F2Vector":
        index = {b: i for i, b in enumerate(basis)}
        support: set[int] = set()
        for lab in labels:
            support ^= {index[lab]}
        return cls(tuple(basis), frozenset(support))

    def labels(self) -> list:
        return [self.basis[i] for i in sorted(self.support)]

    def __add__(self, other: "F2Vector") -> "F2Vector":
        if self.basis != other.basis:
            raise BasisMismatch("vectors on different bases")
        return F2Vector(self.basis, self.support ^ other.support)

    def is_zero(self) -> bool:
        return not self.support

    def bits(self) -> int:
        out = 0
        for i in self.support:
            out |= 1 << i
        return out


@dataclass(frozen=True)
class F2Matrix:
    """Sparse matrix; entry (r, c) means column basis element c hits row r."""

    domain: tuple
    codomain: tuple
    entries: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        for r, c in self.entries:
            if not (0 <= r < len(self.codomain) and 0 <= c < len(self.domain)):
                raise IndexError(f"entry ({r}, {c}) out of range")

    @classmethod
    def from_images(cls, domain: Sequence, codomain: Sequence, images: dict) -> "F2Matrix":
        """Build from a dict mapping domain labels to iterables of codomain labels."""
        cindex = {b: i for i, b in enumerate(codomain)}
        dindex = {b: i for i, b in enumerate(domain)}
        entries: set = set()
        for src, targets in images.items():
            col = dindex[src]
            for t in targets:
                entries ^= {(cindex[t], col)}
        return cls(tuple(domain), tuple(codomain), frozenset(entries))

    @classmethod
    def identity(cls, basis: Sequence) -> "F2Matrix":
        basis = tuple(basis)
        return cls(basis, basis, frozenset((i, i) for i in range(len(basis))))

    @classmethod
    def zero(cls, domain: Sequence, codomain: Sequence) -> "F2Matrix":
        return cls(tuple(domain), tuple(codomain), frozenset())

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.codomain), len(self.domain)

    def column(self, c: int) -> frozenset:
        return frozenset(r for r, cc in self.entries if cc == c)

    def image(self, label) -> list:
        """Codomain labels hit by one domain label."""
        c = self.domain.index(label)
        return [self.codomain[r] for r in sorted(self.column(c))]

    def apply(self, v: F2Vector) -> F2Vector:
        if v.basis != self.domain:
            raise BasisMismatch("vector basis differs from matrix domain")
        out: set = set()
        for r, c in self.entries:
            if c in v.support:
                out ^= {r}
        return F2Vector(self.codomain, frozenset(out))

    def row_bits(self) -> list[int]:
        rows = [0] * len(self.codomain)
        for r, c in self.entries:
            rows[r] |= 1 << c
        return rows

    def column_bits(self) -> list[int]:
        cols = [0] * len(self.domain)
        for r, c in self.entries:
            cols[c] |= 1 << r
        return cols

    def rank(self) -> int:
        return len(_echelon(self.column_bits())[0])

    def is_zero(self) -> bool:
        return not self.entries

    def relabel(self, domain: Sequence | None = None, codomain: Sequence | None = None) -> "F2Matrix":
        """Same entries, new basis labels of equal length."""
        domain = tuple(self.domain if domain is None else domain)
        codomain = tuple(self.codomain if codomain is None else codomain)
        if len(domain) != len(self.domain) or len(codomain) != len(self.codomain):
            raise BasisMismatch("relabelling changes a basis size")
        return F2Matrix(domain, codomain, self.entries)

    def reindex(self, domain: Sequence, codomain: Sequence) -> "F2Matrix":
        """Same map written on permuted bases (labels must agree as sets)."""
        domain, codomain = tuple(domain), tuple(codomain)
        if set(domain) != set(self.domain) or set(codomain) != set(self.codomain):
            raise BasisMismatch("reindexing needs the same labels")
        dpos = {b: i for i, b in enumerate(domain)}
        cpos = {b: i for i, b in enumerate(codomain)}
        entries = frozenset((cpos[self.codomain[r]], dpos[self.domain[c]]) for r, c in self.entries)
        return F2Matrix(domain, codomain, entries)

    def __add__(self, other: "F2Matrix") -> "F2Matrix":
        if self.domain != other.domain or self.codomain != other.codomain:
            raise BasisMismatch("cannot add matrices on different bases")
        return F2Matrix(self.domain, self.codomain, self.entries ^ other.entries)

    def __matmul__(self, other: "F2Matrix") -> "F2Matrix":
        return compose(self, other)

    def to_dense(self) -> list[list[int]]:
        out = [[0] * len(self.domain) for _ in self.codomain]
        for r, c in self.entries:
            out[r][c] = 1
        return out

    def triplets(self) -> str:
        """Plain-text export: header naming both bases, then one `row col` per entry."""
        lines = ["# domain: " + " ".join(label_text(b) for b in self.domain),
                 "# codomain: " + " ".join(label_text(b) for b in self.codomain)]
        lines += [f"{r} {c}" for r, c in sorted(self.entries)]
        return "\n".join(lines) + "\n"


def label_text(label) -> str:
    if isinstance(label, tuple):
        if all(isinstance(x, tuple) for x in label) and label:
            return "(" + "|".join(label_text(x) for x in label) + ")"
        return "{" + ",".join(str(x) for x in label) + "}"
    return str(label)


@dataclass(frozen=True)
class ChainComplexF2:
    basis: tuple
    differential: F2Matrix

    def __post_init__(self):
        if self.differential.domain != self.basis or self.differential.codomain != self.basis:
            raise BasisMismatch("differential must be an endomorphism of the basis")

    def is_complex(self) -> bool:
        return compose(self.differential, self.differential).is_zero()


def compose(f: F2Matrix, g: F2Matrix) -> F2Matrix:
    """f after g."""
    if g.codomain != f.domain:
        raise BasisMismatch("codomain of the inner map differs from the domain of the outer map")
    by_row: dict[int, set] = {}
    for r, c in g.entries:
        by_row.setdefault(r, set()).add(c)
    entries: set = set()
    for r, mid in f.entries:
        for c in by_row.get(mid, ()):
            entries ^= {(r, c)}
    return F2Matrix(g.domain, f.codomain, frozenset(entries))


def transpose(f: F2Matrix) -> F2Matrix:
    return F2Matrix(f.codomain, f.domain, frozenset((c, r) for r, c in f.entries))


def tensor(f: F2Matrix, g: F2Matrix) -> F2Matrix:
    """Kronecker product on pair labels (a, b), ordered lexicographically."""
    dom = tuple((a, b) for a in f.domain for b in g.domain)
    cod = tuple((a, b) for a in f.codomain for b in g.codomain)
    ng_d, ng_c = len(g.domain), len(g.codomain)
    entries = frozenset((r1 * ng_c + r2, c1 * ng_d + c2)
                        for r1, c1 in f.entries for r2, c2 in g.entries)
    return F2Matrix(dom, cod, entries)


def tensor_complex(a: ChainComplexF2, b: ChainComplexF2) -> ChainComplexF2:
    d = tensor(a.differential, F2Matrix.identity(b.basis)) + tensor(F2Matrix.identity(a.basis), b.differential)
    return ChainComplexF2(d.domain, d)


def _echelon(vectors: Sequence[int]) -> tuple[list[int], list[int]]:
    """Reduced pivots of a list of bit vectors; returns (basis, pivot bits)."""
    basis: list[int] = []
    pivots: list[int] = []
    for v in vectors:
        for b, p in zip(basis, pivots):
            if v & p:
                v ^= b
        if v:
            p = v & -v
            for i, b in enumerate(basis):
                if b & p:
                    basis[i] = b ^ v
            basis.append(v)
            pivots.append(p)
    return basis, pivots


def _reduce(v: int, basis: list[int], pivots: list[int]) -> int:
    for b, p in zip(basis, pivots):
        if v & p:
            v ^= b
    return v


def kernel_bits(f: F2Matrix) -> list[int]:
    """Basis of the kernel as bit vectors over the domain."""
    n = len(f.domain)
    cols = f.column_bits()
    # eliminate on augmented vectors: image bits in the high part, source tag in the low part
    shift = n
    basis: list[int] = []
    pivots: list[int] = []
    kernel: list[int] = []
    for c in range(n):
        v = (cols[c] << shift) | (1 << c)
        for b, p in zip(basis, pivots):
            if v & p:
                v ^= b
        if v >> shift:
            high = v >> shift
            p = (high & -high) << shift
            basis.append(v)
            pivots.append(p)
        else:
            kernel.append(v)
    return kernel


def homology(complex_: ChainComplexF2) -> tuple[int, list[F2Vector]]:
    """Rank of homology and cycle representatives of a basis of it."""
    d = complex_.differential
    if not complex_.is_complex():
        raise NotAComplex("not a complex: the differential does not square to zero")
    image, img_piv = _echelon([b for b in d.column_bits() if b])
    cycles = kernel_bits(d)
    basis, pivots = list(image), list(img_piv)
    reps: list[F2Vector] = []
    for z in cycles:
        r = _reduce(z, basis, pivots)
        if r:
            reps.append(F2Vector(complex_.basis, frozenset(i for i in range(len(complex_.basis)) if z >> i & 1)))
            p = r & -r
            for i, b in enumerate(basis):
                if b & p:
                    basis[i] = b ^ r
            basis.append(r)
            pivots.append(p)
    rank = len(complex_.basis) - 2 * len(image)
    if rank != len(reps):
        raise NotAComplex("elimination self-check failed")
    return rank, reps


def is_boundary(complex_: ChainComplexF2, v: F2Vector) -> bool:
    image, piv = _echelon(complex_.differential.column_bits())
    return _reduce(v.bits(), image, piv) == 0


def homology_class_equal(complex_: ChainComplexF2, u: F2Vector, v: F2Vector) -> bool:
    return is_boundary(complex_, u + v)


def verify_chain_map(f: F2Matrix, d_src: F2Matrix, d_tgt: F2Matrix) -> bool:
    """True iff d_tgt . f = f . d_src."""
    if d_src.domain != f.domain or d_tgt.domain != f.codomain:
        raise BasisMismatch("shape mismatch between the map and the differentials")
    return compose(d_tgt, f) == compose(f, d_src)


def induced_on_homology_equal(f: F2Matrix, g: F2Matrix, src: ChainComplexF2, tgt: ChainComplexF2) -> bool:
    """Do two chain maps agree on homology (difference sends cycles to boundaries)?"""
    diff = f + g
    _, reps = homology(src)
    image, piv = _echelon(tgt.differential.column_bits())
    for z in reps:
        if _reduce(diff.apply(z).bits(), image, piv):
            return False
    return True
