"""Prompt/completion JSONL export for external fine-tuning APIs.

Every token is rendered as a single space plus its text, with word tokens
lower-cased so they exist in common subword vocabularies and digits kept
separate so numbers are never grouped.  Each context yields one record per
THINK or STOP the model must produce: the prompt is the context so far and
the completion is the next generated segment.
"""

from __future__ import annotations

import json

from . import tokens as tk
from .tokens import TokenSeq

# Word tokens exported as lower-case words; symbol tokens kept verbatim.
_WORD_TOKENS = tk.MARKERS + tk.CONTROLS + ("VS",)
EXPORT_TEXT: dict[int, str] = {
    i: (text.lower() if text in _WORD_TOKENS else text)
    for i, text in enumerate(tk.VOCAB)
}


def export_text(tokens: TokenSeq) -> str:
    """Tokens as API text: a single space before every token."""
    return "".join(" " + EXPORT_TEXT[t] for t in tokens)


def derive_prompt_completions(context: TokenSeq, target: TokenSeq,
                              ) -> list[dict[str, str]]:
    """One prompt/completion record per generated THINK/STOP segment.

    A segment of the target runs from the first non-PAD position up to and
    including the THINK or STOP that ends it; the prompt is the context
    before the segment starts.
    """
    records = []
    i = 0
    while i < len(target):
        if target[i] == tk.PAD:
            i += 1
            continue
        start = i
        while target[i] not in (tk.THINK, tk.STOP):
            i += 1
        i += 1
        records.append({
            "prompt": export_text(context[:start]),
            "completion": export_text(target[start:i]),
        })
    return records


def write_jsonl(path, records: list[dict[str, str]]) -> int:
    with open(path, "w", encoding="utf-8") as f:
        for record in records:
            f.write(json.dumps(record, ensure_ascii=False) + "\n")
    return len(records)
