"""Choice sequences: the +/- scripts that drive tree growth with freezing.

A sequence is an ordered list of steps, each either an attachment (``+``) or a
freeze (``-``).  The associated walk starts at 1 and moves by +1 or -1 per
step; it counts the active vertices of the tree being built.  A sequence is
*valid* when the walk stays positive strictly before the last step (the walk
may reach 0 exactly at the end, meaning every vertex ends up frozen).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Iterator

from .errors import SequenceSyntaxError


class Step(Enum):
    ATTACH = 1
    FREEZE = -1

    @property
    def sign(self) -> int:
        return self.value

    @property
    def char(self) -> str:
        return "+" if self is Step.ATTACH else "-"


@dataclass(frozen=True)
class ChoiceSequence:
    """Immutable list of attach/freeze steps."""

    steps: tuple[Step, ...]

    def __len__(self) -> int:
        return len(self.steps)

    def __iter__(self) -> Iterator[Step]:
        return iter(self.steps)

    def __add__(self, other: "ChoiceSequence") -> "ChoiceSequence":
        return ChoiceSequence(self.steps + other.steps)

    def __mul__(self, k: int) -> "ChoiceSequence":
        return ChoiceSequence(self.steps * k)

    @property
    def attach_count(self) -> int:
        return sum(1 for s in self.steps if s is Step.ATTACH)

    @property
    def freeze_count(self) -> int:
        return len(self.steps) - self.attach_count

    def signs(self) -> list[int]:
        return [s.sign for s in self.steps]

    def attach_flags(self) -> list[bool]:
        """Per-step booleans (True = attach); the hot-loop representation."""
        return [s is Step.ATTACH for s in self.steps]

    @staticmethod
    def from_signs(signs: Iterable[int]) -> "ChoiceSequence":
        return ChoiceSequence(tuple(Step(int(s)) for s in signs))

    @staticmethod
    def from_text(text: str) -> "ChoiceSequence":
        return parse_sequence(text)

    @property
    def text(self) -> str:
        return render_sequence(self)

    def __str__(self) -> str:
        return self.text


def attach_run(n: int) -> ChoiceSequence:
    """The freeze-free sequence of n attachments (builds the n-edge recursive tree)."""
    return ChoiceSequence((Step.ATTACH,) * n)


def alternating(n: int) -> ChoiceSequence:
    """n repetitions of attach-then-freeze; keeps exactly two vertices active."""
    return ChoiceSequence((Step.ATTACH, Step.FREEZE) * n)


# --------------------------------------------------------------------------
# Text grammar:  seq := term+ ; term := atom ['^' positive-int] ;
#                atom := '+' | '-' | '(' seq ')'        whitespace ignored


def parse_sequence(text: str) -> ChoiceSequence:
    """Parse sequence text, e.g. ``"+^3(-+)^2"``.

    Raises SequenceSyntaxError (with byte offset) on malformed input,
    including a repetition count of 0.
    """
    steps: list[Step] = []
    pos = _parse_seq(text, 0, steps, top=True)
    pos = _skip_ws(text, pos)
    if pos != len(text):
        raise SequenceSyntaxError(f"unexpected character {text[pos]!r}", pos)
    return ChoiceSequence(tuple(steps))


def _skip_ws(text: str, pos: int) -> int:
    while pos < len(text) and text[pos].isspace():
        pos += 1
    return pos


def _parse_seq(text: str, pos: int, out: list[Step], top: bool = False) -> int:
    start = _skip_ws(text, pos)
    pos = start
    any_term = False
    while True:
        pos = _skip_ws(text, pos)
        if pos >= len(text) or text[pos] == ")":
            break
        pos = _parse_term(text, pos, out)
        any_term = True
    if not any_term:
        raise SequenceSyntaxError("expected '+', '-' or '('", pos)
    return pos


def _parse_term(text: str, pos: int, out: list[Step]) -> int:
    ch = text[pos]
    if ch == "+":
        atom: list[Step] = [Step.ATTACH]
        pos += 1
    elif ch == "-":
        atom = [Step.FREEZE]
        pos += 1
    elif ch == "(":
        atom = []
        pos = _parse_seq(text, pos + 1, atom)
        pos = _skip_ws(text, pos)
        if pos >= len(text) or text[pos] != ")":
            raise SequenceSyntaxError("unclosed '('", pos)
        pos += 1
    else:
        raise SequenceSyntaxError(f"expected '+', '-' or '(', got {ch!r}", pos)

    after = _skip_ws(text, pos)
    if after < len(text) and text[after] == "^":
        num_start = _skip_ws(text, after + 1)
        num_end = num_start
        while num_end < len(text) and text[num_end].isdigit():
            num_end += 1
        if num_end == num_start:
            raise SequenceSyntaxError("expected repetition count after '^'", num_start)
        count = int(text[num_start:num_end])
        if count == 0:
            raise SequenceSyntaxError("repetition count must be positive", num_start)
        out.extend(atom * count)
        return num_end
    out.extend(atom)
    return pos


def render_sequence(seq: ChoiceSequence) -> str:
    """Canonical printed form: maximal runs compressed with '^'.

    ``parse_sequence(render_sequence(s)) == s`` for every non-empty sequence
    (the empty sequence renders as "", which the grammar does not accept).
    """
    out: list[str] = []
    steps = seq.steps
    i = 0
    while i < len(steps):
        j = i
        while j < len(steps) and steps[j] is steps[i]:
            j += 1
        run = j - i
        out.append(steps[i].char if run == 1 else f"{steps[i].char}^{run}")
        i = j
    return "".join(out)


# --------------------------------------------------------------------------
# Walk and classification


@dataclass(frozen=True)
class WalkProfile:
    """Active-vertex counts along the sequence.

    ``s_values[j]`` is the count after j steps (``s_values[0] == 1``);
    ``tau`` is the first step index at which the count hits 0, or
    ``math.inf`` if it never does.
    """

    s_values: tuple[int, ...]
    tau: int | float

    @property
    def max_value(self) -> int:
        return max(self.s_values)

    @property
    def final(self) -> int:
        return self.s_values[-1]


def walk_profile(seq: ChoiceSequence) -> WalkProfile:
    values = [1]
    s = 1
    tau: int | float = math.inf
    for j, step in enumerate(seq.steps, start=1):
        s += step.sign
        values.append(s)
        if s == 0 and tau is math.inf:
            tau = j
    return WalkProfile(tuple(values), tau)


@dataclass(frozen=True)
class SequenceClass:
    """Classification of a sequence against a target attachment count n."""

    n: int
    valid: bool
    in_x_n: bool


def is_valid(seq: ChoiceSequence) -> bool:
    """True when the walk stays positive strictly before the final step."""
    s = 1
    for step in seq.steps[:-1]:
        s += step.sign
        if s <= 0:
            return False
    return True


def classify(seq: ChoiceSequence, n: int) -> SequenceClass:
    """Check validity and membership in the family of n-attachment sequences.

    Membership requires exactly n attach steps and a walk that does not hit 0
    before the final step (hitting 0 exactly at the end is allowed).
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    profile = walk_profile(seq)
    valid = all(v > 0 for v in profile.s_values[1:-1])
    member = valid and seq.attach_count == n
    return SequenceClass(n=n, valid=valid, in_x_n=member)


# --------------------------------------------------------------------------
# Exhaustive generation (small-instance test families)


def iter_valid_sequences(length: int) -> Iterator[ChoiceSequence]:
    """All valid sequences of exactly the given length, in lexicographic order
    (attach < freeze)."""
    if length == 0:
        yield ChoiceSequence(())
        return

    prefix: list[Step] = []

    def rec(s: int, remaining: int) -> Iterator[ChoiceSequence]:
        if remaining == 0:
            yield ChoiceSequence(tuple(prefix))
            return
        for step in (Step.ATTACH, Step.FREEZE):
            ns = s + step.sign
            # walk may reach 0 only on the very last step
            if ns <= 0 and remaining > 1:
                continue
            prefix.append(step)
            yield from rec(ns, remaining - 1)
            prefix.pop()

    yield from rec(1, length)


def iter_xn_sequences(n: int, max_length: int) -> Iterator[ChoiceSequence]:
    """All sequences with exactly n attachments, valid walk, and length at most
    max_length.  The family is infinite without the length cap."""
    for m in range(n, max_length + 1):
        for seq in iter_valid_sequences(m):
            if seq.attach_count == n:
                yield seq


def iter_reducible_sequences(max_length: int) -> Iterator[ChoiceSequence]:
    """Valid sequences that start with an attach run followed by a freeze."""
    for m in range(2, max_length + 1):
        for seq in iter_valid_sequences(m):
            if seq.steps[0] is Step.ATTACH and Step.FREEZE in seq.steps:
                yield seq
