import pytest

from rot_lab import tokens as tk


def test_vocabulary_size_and_order():
    assert tk.VOCAB_SIZE == 44
    assert tk.VOCAB[:10] == tuple(str(d) for d in range(10))
    assert tk.VOCAB[-5:] == ("GO", "STOP", "THINK", "TAIL", "PAD")
    assert len(set(tk.VOCAB)) == tk.VOCAB_SIZE


def test_text_round_trip():
    for i, word in enumerate(tk.VOCAB):
        assert tk.TEXT_TO_ID[word] == i
        assert tk.ID_TO_TEXT[i] == word
    seq = tuple(range(tk.VOCAB_SIZE))
    assert tk.from_text(tk.to_text(seq)) == seq
    assert tk.from_text("") == ()
    with pytest.raises(tk.ParseError):
        tk.from_text("GO NOPE")


def test_render_parse_number():
    for n in (0, 7, 10, 409, 10**12 + 5):
        assert tk.parse_number(tk.render_number(n)) == n
    assert tk.to_text(tk.render_number(408)) == "4 0 8"
    # Leading zeros appear when digits are borrowed; they must parse.
    assert tk.parse_number(tk.from_text("0 0 7")) == 7
    with pytest.raises(ValueError):
        tk.render_number(-1)
    with pytest.raises(tk.ParseError):
        tk.parse_number(())
    with pytest.raises(tk.ParseError):
        tk.parse_number((tk.GO,))


def test_is_digit():
    assert all(tk.is_digit(t) for t in tk.DIGIT_IDS)
    assert not tk.is_digit(tk.GO)
    assert not tk.is_digit(tk.PLUS)


def test_vocabulary_table():
    table = tk.vocabulary_table()
    assert len(table) == tk.VOCAB_SIZE
    assert [row["id"] for row in table] == list(range(tk.VOCAB_SIZE))
    kinds = {row["text"]: row["kind"] for row in table}
    assert kinds["0"] == "digit"
    assert kinds["GO"] == "control"
    assert kinds["LCS"] == "marker"
    assert kinds["VS"] == "operator"
    assert kinds["÷"] == "operator"
