import json

from rot_lab import tokens as tk
from rot_lab.contexts import build_rot_tree, wt_training_pair
from rot_lab.exporter import (
    EXPORT_TEXT,
    derive_prompt_completions,
    export_text,
    write_jsonl,
)
from rot_lab.problems import Problem, Task

from conftest import toks

EXPECTED_ROT_LINES = [
    '{"prompt": " go 4 0 + 3 5 =", "completion": " go 0 + 5 = think"}',
    '{"prompt": " go 4 0 + 3 5 = go 0 + 5 = 5 stop",'
    ' "completion": " go 4 + 3 = think"}',
    '{"prompt": " go 4 0 + 3 5 = go 0 + 5 = 5 stop go 4 + 3 = 7 stop",'
    ' "completion": " 7 5 stop"}',
]

EXPECTED_WT_LINE = '{"prompt": " go 4 0 + 3 5 =", "completion": " 7 5 stop"}'


def test_export_text_formatting():
    assert export_text(toks("GO 4 0 + 3 5 =")) == " go 4 0 + 3 5 ="
    assert export_text(toks("1 VS 2")) == " 1 vs 2"
    assert export_text(toks("KNAPSACK TAIL THINK ÷ ×")) == \
        " knapsack tail think ÷ ×"
    assert export_text(()) == ""
    # Every token has an export form; symbols stay verbatim.
    assert set(EXPORT_TEXT) == set(range(tk.VOCAB_SIZE))
    assert EXPORT_TEXT[tk.PLUS] == "+"
    assert EXPORT_TEXT[tk.GO] == "go"


def test_reference_rot_export_lines(tmp_path):
    ctx = build_rot_tree(Problem(Task.ADD, (40, 35)))
    records = derive_prompt_completions(ctx.rendered, ctx.target)
    lines = [json.dumps(r, ensure_ascii=False) for r in records]
    assert lines == EXPECTED_ROT_LINES
    path = tmp_path / "export.jsonl"
    assert write_jsonl(path, records) == 3
    assert path.read_text(encoding="utf-8").splitlines() == EXPECTED_ROT_LINES


def test_reference_wt_export_line():
    context, target = wt_training_pair(Problem(Task.ADD, (40, 35)))
    records = derive_prompt_completions(context, target)
    assert [json.dumps(r, ensure_ascii=False) for r in records] == \
        [EXPECTED_WT_LINE]


def test_tail_context_export_ends_with_think():
    ctx = build_rot_tree(Problem(Task.MUL, (34, 5)))
    records = derive_prompt_completions(ctx.rendered, ctx.target)
    assert records[-1]["completion"] == " tail 1 5 0 + 2 0 = think"


def test_export_reconstruction_property():
    # Prompts grow monotonically and completions partition the generated
    # segments: prompt + previous completions with think answered matches
    # the next prompt's prefix.
    ctx = build_rot_tree(Problem(Task.ADD, (408, 351)))
    records = derive_prompt_completions(ctx.rendered, ctx.target)
    for earlier, later in zip(records, records[1:]):
        assert later["prompt"].startswith(earlier["prompt"])
    assert records[-1]["completion"].endswith(" stop")
    full = records[-1]["prompt"] + records[-1]["completion"]
    assert full == export_text(ctx.rendered)
