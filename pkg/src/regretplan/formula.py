"""Co-safe LTL tasks and their good-prefix automata.

Surface syntax: ``true``, atoms over ``[a-z0-9_]``, ``!`` (atoms only),
``&``, ``|``, ``X`` (next), ``U`` (until, right-associative), ``F``
(eventually), parentheses.  Precedence: unary > U > & > |.

Translation goes residual-by-residual: reading a letter rewrites the
formula to the obligation that remains, with eager boolean
simplification.  The reachable residuals form a deterministic automaton
which is then Hopcroft-minimized.  A word is accepted exactly when every
infinite continuation would discharge the remaining obligation, so
accepting states are closed under all transitions.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable

from .errors import (
    AlphabetTooLarge,
    AtomNotDeclared,
    FormulaSyntaxError,
    NotCoSafe,
    SolverInvariantError,
)

MAX_ATOMS = 8

Letter = frozenset


class Formula:
    """Base class for task formula nodes. Instances are immutable."""

    def __str__(self) -> str:
        return _to_str(self, 0)

    def __repr__(self) -> str:
        return str(self)


@dataclass(frozen=True, repr=False)
class TrueF(Formula):
    pass


@dataclass(frozen=True, repr=False)
class FalseF(Formula):
    """Unsatisfiable residual; never produced by the parser."""


@dataclass(frozen=True, repr=False)
class Atom(Formula):
    name: str


@dataclass(frozen=True, repr=False)
class Not(Formula):
    arg: Atom


@dataclass(frozen=True, repr=False)
class And(Formula):
    args: tuple


@dataclass(frozen=True, repr=False)
class Or(Formula):
    args: tuple


@dataclass(frozen=True, repr=False)
class Next(Formula):
    arg: Formula


@dataclass(frozen=True, repr=False)
class Until(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, repr=False)
class Eventually(Formula):
    """Sugar for Until(true, arg); expanded before translation."""

    arg: Formula


TRUE = TrueF()
FALSE = FalseF()

_PREC_OR, _PREC_AND, _PREC_UNTIL, _PREC_UNARY = 0, 1, 2, 3


def _to_str(f: Formula, ctx: int) -> str:
    if isinstance(f, TrueF):
        return "true"
    if isinstance(f, FalseF):
        return "false"
    if isinstance(f, Atom):
        return f.name
    if isinstance(f, Not):
        return "!" + f.arg.name
    if isinstance(f, Next):
        return "X " + _to_str(f.arg, _PREC_UNARY)
    if isinstance(f, Eventually):
        return "F " + _to_str(f.arg, _PREC_UNARY)
    if isinstance(f, Until):
        s = _to_str(f.left, _PREC_UNARY) + " U " + _to_str(f.right, _PREC_UNTIL)
        return "(" + s + ")" if ctx > _PREC_UNTIL else s
    if isinstance(f, And):
        s = " & ".join(_to_str(a, _PREC_AND + 1) for a in f.args)
        return "(" + s + ")" if ctx > _PREC_AND else s
    if isinstance(f, Or):
        s = " | ".join(_to_str(a, _PREC_OR + 1) for a in f.args)
        return "(" + s + ")" if ctx > _PREC_OR else s
    raise TypeError(f"not a formula: {f!r}")


def atoms_of(f: Formula) -> frozenset:
    """All atom names occurring in the formula."""
    if isinstance(f, Atom):
        return frozenset([f.name])
    if isinstance(f, Not):
        return frozenset([f.arg.name])
    if isinstance(f, (TrueF, FalseF)):
        return frozenset()
    if isinstance(f, (Next, Eventually)):
        return atoms_of(f.arg)
    if isinstance(f, Until):
        return atoms_of(f.left) | atoms_of(f.right)
    return frozenset().union(*(atoms_of(a) for a in f.args))


# ---------------------------------------------------------------------------
# parsing

_TOKEN_RE = re.compile(r"\s*(?:([a-z0-9_]+)|([!&|()])|([XUFGR]))")

_ALWAYS_LIKE = {"G": "always", "R": "release"}


def _tokenize(text: str) -> list:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            rest = text[pos:].lstrip()
            if not rest:
                break
            raise FormulaSyntaxError(f"unexpected character {rest[0]!r} at position {pos}")
        pos = m.end()
        word, punct, op = m.groups()
        if word is not None:
            tokens.append(("true", None) if word == "true" else ("atom", word))
        elif punct is not None:
            tokens.append((punct, None))
        else:
            if op in _ALWAYS_LIKE:
                raise NotCoSafe(f"operator {op!r} ({_ALWAYS_LIKE[op]}) is not co-safe")
            tokens.append((op, None))
    return tokens


class _Parser:
    def __init__(self, tokens):
        self.tokens = tokens
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos][0] if self.pos < len(self.tokens) else None

    def take(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind):
        if self.peek() != kind:
            raise FormulaSyntaxError(f"expected {kind!r}, found {self.peek()!r}")
        return self.take()

    def parse_or(self) -> Formula:
        args = [self.parse_and()]
        while self.peek() == "|":
            self.take()
            args.append(self.parse_and())
        return args[0] if len(args) == 1 else Or(tuple(args))

    def parse_and(self) -> Formula:
        args = [self.parse_until()]
        while self.peek() == "&":
            self.take()
            args.append(self.parse_until())
        return args[0] if len(args) == 1 else And(tuple(args))

    def parse_until(self) -> Formula:
        left = self.parse_unary()
        if self.peek() == "U":
            self.take()
            return Until(left, self.parse_until())
        return left

    def parse_unary(self) -> Formula:
        kind = self.peek()
        if kind is None:
            raise FormulaSyntaxError("unexpected end of input")
        if kind == "!":
            self.take()
            arg = self.parse_unary()
            if not isinstance(arg, Atom):
                raise NotCoSafe(f"negation applied to non-atom: !({arg})")
            return Not(arg)
        if kind == "X":
            self.take()
            return Next(self.parse_unary())
        if kind == "F":
            self.take()
            return Eventually(self.parse_unary())
        if kind == "(":
            self.take()
            inner = self.parse_or()
            self.expect(")")
            return inner
        if kind == "true":
            self.take()
            return TRUE
        if kind == "atom":
            return Atom(self.take()[1])
        raise FormulaSyntaxError(f"unexpected token {kind!r}")


def parse(text: str) -> Formula:
    """Parse task text into a formula tree; sugar is kept as written."""
    parser = _Parser(_tokenize(text))
    f = parser.parse_or()
    if parser.peek() is not None:
        raise FormulaSyntaxError(f"trailing input starting at token {parser.peek()!r}")
    return f


# ---------------------------------------------------------------------------
# residual construction with eager simplification

def _key(f: Formula) -> str:
    return str(f)


def conj(items: Iterable[Formula]) -> Formula:
    flat: dict = {}
    for it in items:
        if isinstance(it, FalseF):
            return FALSE
        if isinstance(it, TrueF):
            continue
        parts = it.args if isinstance(it, And) else (it,)
        for p in parts:
            flat[_key(p)] = p
    if not flat:
        return TRUE
    args = tuple(flat[k] for k in sorted(flat))
    return args[0] if len(args) == 1 else And(args)


def disj(items: Iterable[Formula]) -> Formula:
    flat: dict = {}
    for it in items:
        if isinstance(it, TrueF):
            return TRUE
        if isinstance(it, FalseF):
            continue
        parts = it.args if isinstance(it, Or) else (it,)
        for p in parts:
            flat[_key(p)] = p
    if not flat:
        return FALSE
    args = tuple(flat[k] for k in sorted(flat))
    return args[0] if len(args) == 1 else Or(args)


def canonical(f: Formula) -> Formula:
    """Rebuild a formula through the simplifying constructors."""
    if isinstance(f, (TrueF, FalseF, Atom, Not)):
        return f
    if isinstance(f, Next):
        return Next(canonical(f.arg))
    if isinstance(f, Eventually):
        return Eventually(canonical(f.arg))
    if isinstance(f, Until):
        return Until(canonical(f.left), canonical(f.right))
    if isinstance(f, And):
        return conj(canonical(a) for a in f.args)
    return disj(canonical(a) for a in f.args)


def expand_sugar(f: Formula) -> Formula:
    """Rewrite every Eventually(p) into Until(true, p)."""
    if isinstance(f, (TrueF, FalseF, Atom, Not)):
        return f
    if isinstance(f, Next):
        return Next(expand_sugar(f.arg))
    if isinstance(f, Eventually):
        return Until(TRUE, expand_sugar(f.arg))
    if isinstance(f, Until):
        return Until(expand_sugar(f.left), expand_sugar(f.right))
    if isinstance(f, And):
        return And(tuple(expand_sugar(a) for a in f.args))
    return Or(tuple(expand_sugar(a) for a in f.args))


def progress(f: Formula, letter) -> Formula:
    """Residual obligation after reading one letter (a set of atoms).

    Iterating progression over a word and landing on syntactic ``true``
    certifies the word as a good prefix; the converse direction is
    checked against reference automata in the test-suite.
    """
    sigma = frozenset(letter)
    return _progress(f, sigma)


def _progress(f: Formula, sigma: Letter) -> Formula:
    if isinstance(f, (TrueF, FalseF)):
        return f
    if isinstance(f, Atom):
        return TRUE if f.name in sigma else FALSE
    if isinstance(f, Not):
        return FALSE if f.arg.name in sigma else TRUE
    if isinstance(f, And):
        return conj(_progress(a, sigma) for a in f.args)
    if isinstance(f, Or):
        return disj(_progress(a, sigma) for a in f.args)
    if isinstance(f, Next):
        return canonical(f.arg)
    if isinstance(f, Until):
        hold = _progress(f.left, sigma)
        goal = _progress(f.right, sigma)
        return disj([goal, conj([hold, Until(canonical(f.left), canonical(f.right))])])
    if isinstance(f, Eventually):
        return disj([_progress(f.arg, sigma), Eventually(canonical(f.arg))])
    raise TypeError(f"not a formula: {f!r}")


def good_prefix_by_progression(f: Formula, word: Iterable) -> bool:
    """Progression oracle: True residual after the whole word."""
    cur = canonical(f)
    for letter in word:
        cur = progress(cur, letter)
    return isinstance(cur, TrueF)


# ---------------------------------------------------------------------------
# deterministic automaton over 2^atoms

@dataclass(frozen=True)
class Dfa:
    """Total DFA over the powerset alphabet of a declared atom set.

    Letters are frozensets of atom names; internally a letter is the
    bitmask index over the sorted atom tuple.  Accepting states are
    absorbing, so acceptance is closed under word extension.
    """

    atoms: tuple
    n: int
    initial: int
    accepting: frozenset
    trans: tuple  # trans[q][letter_index] -> q'

    def letter_index(self, letter) -> int:
        idx = 0
        sigma = frozenset(letter)
        for bit, name in enumerate(self.atoms):
            if name in sigma:
                idx |= 1 << bit
        unknown = sigma - set(self.atoms)
        if unknown:
            raise AtomNotDeclared(f"letter uses undeclared atoms {sorted(unknown)}")
        return idx

    def letters(self) -> list:
        out = []
        for idx in range(1 << len(self.atoms)):
            out.append(frozenset(a for bit, a in enumerate(self.atoms) if idx & (1 << bit)))
        return out

    def step(self, q: int, letter) -> int:
        return self.trans[q][self.letter_index(letter)]

    def run(self, word: Iterable) -> int:
        q = self.initial
        for letter in word:
            q = self.step(q, letter)
        return q

    def accepts(self, word: Iterable) -> bool:
        return self.run(word) in self.accepting


def to_dfa(f: Formula, atoms: Iterable) -> Dfa:
    """Translate a task formula into the minimal good-prefix DFA."""
    atom_tuple = tuple(sorted(set(atoms)))
    if len(atom_tuple) > MAX_ATOMS:
        raise AlphabetTooLarge(f"{len(atom_tuple)} atoms exceeds cap of {MAX_ATOMS}")
    missing = atoms_of(f) - set(atom_tuple)
    if missing:
        raise AtomNotDeclared(f"formula uses undeclared atoms {sorted(missing)}")

    letters = [
        frozenset(a for bit, a in enumerate(atom_tuple) if idx & (1 << bit))
        for idx in range(1 << len(atom_tuple))
    ]

    root = canonical(expand_sugar(f))
    states = {_key(root): 0}
    residuals = [root]
    trans: list = []
    queue = [root]
    while queue:
        cur = queue.pop(0)
        row = []
        for letter in letters:
            nxt = _progress(cur, letter)
            k = _key(nxt)
            if k not in states:
                states[k] = len(residuals)
                residuals.append(nxt)
                queue.append(nxt)
            row.append(states[k])
        trans.append(row)

    accepting = _inevitable_true(residuals, trans)
    merged_n, merged_initial, merged_acc, merged_trans = _hopcroft(
        len(residuals), 0, accepting, trans
    )
    n, initial, acc, tr = _renumber_bfs(merged_n, merged_initial, merged_acc, merged_trans)

    for q in acc:
        for target in tr[q]:
            if target not in acc:
                raise SolverInvariantError("accepting states must be absorbing")
    return Dfa(atoms=atom_tuple, n=n, initial=initial, accepting=frozenset(acc), trans=tr)


def _inevitable_true(residuals: list, trans: list) -> set:
    """States from which every infinite letter sequence discharges the
    obligation (reaches the ``true`` residual)."""
    n = len(residuals)
    true_states = {i for i, r in enumerate(residuals) if isinstance(r, TrueF)}
    # peel states whose every transition leads into the already-settled set
    settled = set(true_states)
    changed = True
    while changed:
        changed = False
        for i in range(n):
            if i in settled:
                continue
            if all(t in settled for t in trans[i]):
                settled.add(i)
                changed = True
    return settled


def _hopcroft(n: int, initial: int, accepting: set, trans: list):
    """Partition-refine states; returns the quotient automaton."""
    k = len(trans[0]) if trans else 1
    inverse: list = [[[] for _ in range(n)] for _ in range(k)]
    for q in range(n):
        for a in range(k):
            inverse[a][trans[q][a]].append(q)

    acc = frozenset(accepting)
    rest = frozenset(range(n)) - acc
    partition = {b for b in (acc, rest) if b}
    work = set()
    if acc and rest:
        work.add(acc if len(acc) <= len(rest) else rest)

    block_of = {}
    for block in partition:
        for q in block:
            block_of[q] = block

    while work:
        splitter = work.pop()
        for a in range(k):
            affected: dict = {}
            for target in splitter:
                for q in inverse[a][target]:
                    blk = block_of[q]
                    affected.setdefault(id(blk), (blk, set()))[1].add(q)
            for _, (blk, overlap) in affected.items():
                if len(overlap) == len(blk):
                    continue
                part1 = frozenset(overlap)
                part2 = blk - part1
                partition.remove(blk)
                partition.add(part1)
                partition.add(part2)
                for q in part1:
                    block_of[q] = part1
                for q in part2:
                    block_of[q] = part2
                if blk in work:
                    work.remove(blk)
                    work.add(part1)
                    work.add(part2)
                else:
                    work.add(part1 if len(part1) <= len(part2) else part2)

    blocks = sorted(partition, key=lambda b: min(b))
    index = {id(b): i for i, b in enumerate(blocks)}
    new_trans = []
    for b in blocks:
        q = min(b)
        new_trans.append([index[id(block_of[trans[q][a]])] for a in range(k)])
    new_initial = index[id(block_of[initial])]
    new_acc = {index[id(block_of[q])] for q in accepting}
    return len(blocks), new_initial, new_acc, new_trans


def _renumber_bfs(n: int, initial: int, accepting: set, trans: list):
    """Relabel states in breadth-first discovery order from the initial."""
    order = {initial: 0}
    queue = [initial]
    while queue:
        q = queue.pop(0)
        for target in trans[q]:
            if target not in order:
                order[target] = len(order)
                queue.append(target)
    if len(order) != n:  # minimization already dropped unreachables
        raise SolverInvariantError("quotient automaton has unreachable states")
    k = len(trans[0]) if trans else 1
    new_trans: list = [None] * n
    for q, new_q in order.items():
        new_trans[new_q] = tuple(order[trans[q][a]] for a in range(k))
    return n, 0, {order[q] for q in accepting}, tuple(new_trans)


# ---------------------------------------------------------------------------
# JSON form

def dfa_to_json(dfa: Dfa) -> dict:
    transitions = []
    letters = dfa.letters()
    for q in range(dfa.n):
        for idx, letter in enumerate(letters):
            transitions.append(
                {"from": q, "letter": sorted(letter), "to": dfa.trans[q][idx]}
            )
    return {
        "atoms": list(dfa.atoms),
        "states": dfa.n,
        "initial": dfa.initial,
        "accepting": sorted(dfa.accepting),
        "transitions": transitions,
    }


def dfa_from_json(data: dict) -> Dfa:
    atom_tuple = tuple(sorted(data["atoms"]))
    n = data["states"]
    k = 1 << len(atom_tuple)
    rows = [[None] * k for _ in range(n)]
    probe = Dfa(atoms=atom_tuple, n=n, initial=data["initial"],
                accepting=frozenset(data["accepting"]), trans=())
    for entry in data["transitions"]:
        rows[entry["from"]][probe.letter_index(entry["letter"])] = entry["to"]
    for q, row in enumerate(rows):
        if any(t is None for t in row):
            raise FormulaSyntaxError(f"transition table not exhaustive at state {q}")
    return Dfa(
        atoms=atom_tuple,
        n=n,
        initial=data["initial"],
        accepting=frozenset(data["accepting"]),
        trans=tuple(tuple(row) for row in rows),
    )
