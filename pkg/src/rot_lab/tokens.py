"""Fixed token vocabulary and number rendering.

Every sequence handled by the rest of the package is a tuple of integer
token ids from this vocabulary.  Ids are assigned in a fixed, documented
order (digits, then operator symbols, then word markers, then control
tokens) so that serialized datasets are stable across runs and versions.
"""

from __future__ import annotations

from typing import Iterable, Sequence

DIGITS = tuple(str(d) for d in range(10))
OPERATORS = ("+", "-", "*", "÷", "=", "VS", "R", ",", ";", "&", "@", "$", "×", "(", ")", "|")
MARKERS = (
    "LCS", "LPS", "KNAPSACK", "MCM", "SORT", "MERGE", "ACC",
    "EQUAL", "TRUE", "FALSE", "LT", "EQ", "GT",
)
CONTROLS = ("GO", "STOP", "THINK", "TAIL", "PAD")

VOCAB: tuple[str, ...] = DIGITS + OPERATORS + MARKERS + CONTROLS
VOCAB_SIZE = len(VOCAB)

TEXT_TO_ID: dict[str, int] = {text: i for i, text in enumerate(VOCAB)}
ID_TO_TEXT: tuple[str, ...] = VOCAB

TokenSeq = tuple[int, ...]

# Commonly used ids, bound once for readability elsewhere.
PLUS = TEXT_TO_ID["+"]
MINUS = TEXT_TO_ID["-"]
STAR = TEXT_TO_ID["*"]
DIVIDE = TEXT_TO_ID["÷"]
EQUALS = TEXT_TO_ID["="]
VS = TEXT_TO_ID["VS"]
REMAINDER = TEXT_TO_ID["R"]
COMMA = TEXT_TO_ID[","]
SEMICOLON = TEXT_TO_ID[";"]
AMP = TEXT_TO_ID["&"]
AT = TEXT_TO_ID["@"]
DOLLAR = TEXT_TO_ID["$"]
TIMES = TEXT_TO_ID["×"]
LPAREN = TEXT_TO_ID["("]
RPAREN = TEXT_TO_ID[")"]
BAR = TEXT_TO_ID["|"]

LCS_T = TEXT_TO_ID["LCS"]
LPS_T = TEXT_TO_ID["LPS"]
KNAPSACK_T = TEXT_TO_ID["KNAPSACK"]
MCM_T = TEXT_TO_ID["MCM"]
SORT_T = TEXT_TO_ID["SORT"]
MERGE_T = TEXT_TO_ID["MERGE"]
ACC_T = TEXT_TO_ID["ACC"]
EQUAL_T = TEXT_TO_ID["EQUAL"]
TRUE_T = TEXT_TO_ID["TRUE"]
FALSE_T = TEXT_TO_ID["FALSE"]
LT = TEXT_TO_ID["LT"]
EQ = TEXT_TO_ID["EQ"]
GT = TEXT_TO_ID["GT"]

GO = TEXT_TO_ID["GO"]
STOP = TEXT_TO_ID["STOP"]
THINK = TEXT_TO_ID["THINK"]
TAIL = TEXT_TO_ID["TAIL"]
PAD = TEXT_TO_ID["PAD"]

DIGIT_IDS = tuple(TEXT_TO_ID[d] for d in DIGITS)
_DIGIT_SET = frozenset(DIGIT_IDS)


def is_digit(token: int) -> bool:
    return token in _DIGIT_SET


class ParseError(ValueError):
    """A token sequence does not have the expected form."""


def render_number(n: int) -> TokenSeq:
    """Render a non-negative integer as digit tokens, most significant first."""
    if n < 0:
        raise ValueError(f"cannot render negative number {n}")
    return tuple(TEXT_TO_ID[c] for c in str(n))


def parse_number(tokens: Sequence[int]) -> int:
    """Inverse of render_number; accepts leading zeros (borrowed-digit reads)."""
    if not tokens:
        raise ParseError("empty digit run")
    for t in tokens:
        if t not in _DIGIT_SET:
            raise ParseError(f"non-digit token {ID_TO_TEXT[t]!r} in number")
    return int("".join(ID_TO_TEXT[t] for t in tokens))


def to_text(tokens: Iterable[int]) -> str:
    """Space-joined text form; used as the canonical dedup key."""
    return " ".join(ID_TO_TEXT[t] for t in tokens)


def from_text(text: str) -> TokenSeq:
    """Inverse of to_text."""
    if not text:
        return ()
    try:
        return tuple(TEXT_TO_ID[part] for part in text.split(" "))
    except KeyError as exc:
        raise ParseError(f"unknown token text {exc.args[0]!r}") from None


def vocabulary_table() -> list[dict]:
    """Vocabulary as JSON-ready records (id, text, kind)."""
    table = []
    for i, text in enumerate(VOCAB):
        if text in DIGITS:
            kind = "digit"
        elif text in CONTROLS:
            kind = "control"
        elif text in MARKERS:
            kind = "marker"
        else:
            kind = "operator"
        table.append({"id": i, "text": text, "kind": kind})
    return table
