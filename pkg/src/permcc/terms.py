"""Ground terms over a declared signature plus a disjoint namespace of fresh constants."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Sequence, Union

from permcc.permgroup import Permutation

THEORY_TAGS = ("I", "N", "U", "IU", "NU")


class TermError(ValueError):
    pass


class UnknownSymbol(TermError):
    pass


class ArityMismatch(TermError):
    pass


class InvalidPosition(TermError):
    pass


class SignatureError(TermError):
    pass


@dataclass(frozen=True)
class Symbol:
    name: str
    arity: int

    def __str__(self) -> str:
        return f"{self.name}/{self.arity}"


class App:
    """Application of a signature symbol; 0-ary symbols are constants of F."""

    __slots__ = ("head", "args", "_hash")

    def __init__(self, head: Symbol, args: Sequence["Term"] = ()):
        self.head = head
        self.args = tuple(args)
        self._hash = hash((head.name, self.args))

    def __eq__(self, other):
        if self is other:
            return True
        return (
            isinstance(other, App)
            and self._hash == other._hash
            and self.head == other.head
            and self.args == other.args
        )

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"App({self})"

    def __str__(self):
        if not self.args:
            return self.head.name
        return f"{self.head.name}({','.join(str(a) for a in self.args)})"


class KConst:
    """Fresh constant c_i; never equal to any App."""

    __slots__ = ("index",)

    def __init__(self, index: int):
        if index < 0:
            raise ValueError("K-constant index must be non-negative")
        self.index = index

    def __eq__(self, other):
        return isinstance(other, KConst) and other.index == self.index

    def __hash__(self):
        return hash(("#k", self.index))

    def __lt__(self, other: "KConst") -> bool:
        return self.index < other.index

    def __repr__(self):
        return f"KConst({self.index})"

    def __str__(self):
        return f"c{self.index}"

    @property
    def args(self) -> tuple:
        return ()


Term = Union[App, KConst]
Position = tuple[int, ...]


@dataclass(frozen=True)
class Equation:
    lhs: Term
    rhs: Term

    def __str__(self) -> str:
        return f"{self.lhs} = {self.rhs}"


@dataclass(frozen=True)
class BTheorySpec:
    symbol: Symbol
    tag: str
    zero: Symbol | None = None

    @property
    def idempotent(self) -> bool:
        return "I" in self.tag

    @property
    def nilpotent(self) -> bool:
        return "N" in self.tag

    @property
    def unit(self) -> bool:
        return "U" in self.tag


@dataclass
class Signature:
    symbols: dict[str, Symbol] = field(default_factory=dict)
    perm_gens: dict[str, list[Permutation]] = field(default_factory=dict)
    b_theory: BTheorySpec | None = None

    def declare(self, name: str, arity: int) -> Symbol:
        if arity < 0:
            raise SignatureError(f"negative arity for {name}")
        old = self.symbols.get(name)
        if old is not None:
            if old.arity != arity:
                raise SignatureError(f"{name} redeclared with arity {arity} (was {old.arity})")
            return old
        sym = Symbol(name, arity)
        self.symbols[name] = sym
        return sym

    def __getitem__(self, name: str) -> Symbol:
        try:
            return self.symbols[name]
        except KeyError:
            raise UnknownSymbol(f"unknown symbol {name!r}") from None

    def __contains__(self, name: str) -> bool:
        return name in self.symbols

    def rank(self, name: str) -> int:
        """Declaration rank, used as the symbol precedence in term orders."""
        return self._ranks()[name]

    def ranks(self) -> dict[str, int]:
        return dict(self._ranks())

    def _ranks(self) -> dict[str, int]:
        return {n: i for i, n in enumerate(self.symbols)}

    def add_perm(self, name: str, perm: Permutation) -> None:
        sym = self[name]
        if perm.degree != sym.arity:
            raise SignatureError(
                f"permutation of degree {perm.degree} for {name} of arity {sym.arity}"
            )
        self.perm_gens.setdefault(name, []).append(perm)

    def set_theory(self, name: str, tag: str, zero: str | None = None) -> None:
        if self.b_theory is not None:
            raise SignatureError("at most one interpreted theory per signature")
        if tag not in THEORY_TAGS:
            raise SignatureError(f"unknown theory tag {tag!r}")
        sym = self[name]
        if sym.arity != 2:
            raise SignatureError(f"interpreted symbol {name} must be binary")
        zsym = None
        if "N" in tag or "U" in tag:
            if zero is None:
                raise SignatureError(f"theory {tag} needs zero=<symbol>")
            zsym = self[zero]
            if zsym.arity != 0:
                raise SignatureError(f"zero symbol {zero} must be 0-ary")
        elif zero is not None:
            zsym = self[zero]
        self.b_theory = BTheorySpec(sym, tag, zsym)

    def check(self) -> None:
        """Cross-declaration invariants; call once all declarations are in."""
        from permcc.permgroup import Permutation as _P, generate

        for name, gens in self.perm_gens.items():
            for g in gens:
                if g.degree != self[name].arity:
                    raise SignatureError(f"bad permutation degree for {name}")
        bt = self.b_theory
        if bt is not None and self.perm_gens.get(bt.symbol.name):
            grp = generate(2, self.perm_gens[bt.symbol.name])
            if not grp.contains(_P((2, 1))):
                raise SignatureError(
                    f"interpreted symbol {bt.symbol.name} with permutations must be commutative"
                )

    def app(self, name: str, *args: Term) -> App:
        sym = self[name]
        if len(args) != sym.arity:
            raise ArityMismatch(f"{name} expects {sym.arity} arguments, got {len(args)}")
        return App(sym, args)


def validate(t: Term, sig: Signature) -> None:
    """Raise UnknownSymbol / ArityMismatch naming the offending path."""
    for pos, node in iter_positions(t):
        if isinstance(node, KConst):
            continue
        declared = sig.symbols.get(node.head.name)
        if declared is None:
            raise UnknownSymbol(f"unknown symbol {node.head.name!r} at position {list(pos)}")
        if declared.arity != node.head.arity or len(node.args) != declared.arity:
            raise ArityMismatch(
                f"{node.head.name} expects {declared.arity} arguments, "
                f"got {len(node.args)} at position {list(pos)}"
            )


def depth(t: Term) -> int:
    if not t.args:
        return 0
    return 1 + max(depth(a) for a in t.args)


def is_flat(t: Term) -> bool:
    return all(not a.args for a in t.args)


def size(t: Term) -> int:
    return 1 + sum(size(a) for a in t.args)


def iter_positions(t: Term, prefix: Position = ()) -> Iterator[tuple[Position, Term]]:
    """Pre-order walk yielding (position, subterm); children are 1-based."""
    yield prefix, t
    for i, a in enumerate(t.args, 1):
        yield from iter_positions(a, prefix + (i,))


def subterms(t: Term) -> Iterator[Term]:
    return (s for _, s in iter_positions(t))


def subterm_at(t: Term, p: Sequence[int]) -> Term:
    node = t
    for i in p:
        if not 1 <= i <= len(node.args):
            raise InvalidPosition(f"position {list(p)} not in {t}")
        node = node.args[i - 1]
    return node


def replace_at(t: Term, p: Sequence[int], u: Term) -> Term:
    if not p:
        return u
    i = p[0]
    if isinstance(t, KConst) or not 1 <= i <= len(t.args):
        raise InvalidPosition(f"position {list(p)} not in {t}")
    args = list(t.args)
    args[i - 1] = replace_at(args[i - 1], p[1:], u)
    return App(t.head, args)


def k_constants(t: Term) -> set[KConst]:
    return {s for s in subterms(t) if isinstance(s, KConst)}


def symbols_of(t: Term) -> set[Symbol]:
    return {s.head for s in subterms(t) if isinstance(s, App)}
