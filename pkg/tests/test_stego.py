import math
import random

import pytest
from hypothesis import given, settings
import hypothesis.strategies as st

from markovstego.corpus import BOS, EOS
from markovstego.errors import CapacityError, DecodeMismatch, TruncatedPayload
from markovstego.stego import (
    EmbedConfig,
    Payload,
    StepCoder,
    embed,
    extract,
    format_text,
    frame_payload,
    hide,
    parse_text,
    reveal,
    unframe_payload,
)

from conftest import toy_model, uniform_model


def test_frame_a5():
    assert frame_payload(Payload(b"\xa5")) == "0" * 28 + "1000" + "10100101"


def test_frame_empty():
    assert frame_payload(Payload(b"")) == "0" * 32
    assert unframe_payload("0" * 32) == Payload(b"")


def test_unframe_ignores_surplus_and_detects_truncation():
    bits = frame_payload(Payload(b"hi"))
    assert unframe_payload(bits + "1011").data == b"hi"
    with pytest.raises(TruncatedPayload):
        unframe_payload(bits[:-1])
    with pytest.raises(TruncatedPayload):
        unframe_payload("0" * 31)


def test_frame_roundtrip_many():
    rng = random.Random(5)
    for _ in range(1000):
        p = Payload(rng.randbytes(rng.randint(0, 64)))
        assert unframe_payload(frame_payload(p)) == p


def test_hand_traced_sentence(stego_toy):
    text, trace = embed(stego_toy, "01", EmbedConfig(cps=2, keyword_seed=0))
    assert text == [["i", "am", "ok"]]
    steps = trace.sentences[0]
    assert [(s.pool_size, s.code_length) for s in steps] == [(2, 1), (2, 1), (1, 0)]
    assert trace.bits_coded == trace.payload_bits == 2


def test_toy_roundtrip_a5(stego_toy):
    config = EmbedConfig(cps=2, keyword_seed=1)
    text, trace = hide(stego_toy, b"\xa5", config)
    assert len(text) == 20 and all(len(s) == 3 for s in text)
    assert reveal(stego_toy, text, config) == b"\xa5"


def test_empty_payload_roundtrip(stego_toy):
    config = EmbedConfig(cps=2, keyword_seed=0)
    text, trace = embed(stego_toy, frame_payload(Payload()), config)
    assert trace.payload_bits == 32
    assert extract(stego_toy, text, config) == Payload()


def test_cps_mismatch_detected(small_desk_model):
    text, _ = hide(small_desk_model, b"\xa5", EmbedConfig(cps=2, keyword_seed=0))
    with pytest.raises((DecodeMismatch, TruncatedPayload)):
        extract(small_desk_model, text, EmbedConfig(cps=4))


def test_cps_mismatch_can_be_silent():
    # The length header has no integrity check: here every cps=2 codeword b
    # reads back as "0" + b at cps=4, so the header decodes as length 0.
    model = uniform_model(2)
    text, _ = hide(model, b"\xa5", EmbedConfig(cps=2, keyword_seed=0))
    assert extract(model, text, EmbedConfig(cps=4)) == Payload(b"")


def test_model_mismatch_detected(small_desk_model, stego_toy):
    text, _ = hide(small_desk_model, b"secret", EmbedConfig(cps=8, keyword_seed=0))
    with pytest.raises(DecodeMismatch) as info:
        extract(stego_toy, text, EmbedConfig(cps=8))
    assert info.value.sentence == 0 and info.value.position == 0


def test_foreign_word_position(stego_toy):
    with pytest.raises(DecodeMismatch) as info:
        extract(stego_toy, [["i", "am", "fine"], ["i", "was", "great"]], EmbedConfig(cps=2))
    assert (info.value.sentence, info.value.position) == (1, 2)


@pytest.mark.parametrize("word", ["<s>", "</s>", "<unk>"])
def test_reserved_tokens_in_text_are_rejected(stego_toy, word):
    with pytest.raises(DecodeMismatch) as info:
        extract(stego_toy, [["i", word, "ok"]], EmbedConfig(cps=2))
    assert (info.value.sentence, info.value.position) == (0, 1)


def test_empty_text():
    model = uniform_model(1)
    with pytest.raises(TruncatedPayload):
        extract(model, [], EmbedConfig(cps=2))
    with pytest.raises(TruncatedPayload):
        extract(model, [["w0"]], EmbedConfig(cps=2))


def test_no_capacity():
    model = toy_model(["a b c"])
    with pytest.raises(CapacityError):
        hide(model, b"x", EmbedConfig(cps=2, keyword_seed=0))


def test_bits_exhausted_mid_sentence_finishes_sentence(small_desk_model):
    text, trace = hide(small_desk_model, b"\x00\xff\x13", EmbedConfig(cps=16, keyword_seed=9))
    last = trace.sentences[-1]
    assert trace.payload_bits == 56
    assert trace.bits_coded >= 56
    assert len(text[-1]) == 32 or last[-1].code_length == len(
        StepCoder(small_desk_model, 16)(last[-1].context).codes[EOS]
    )


def test_forced_stop_stays_in_sync(small_desk_model):
    config = EmbedConfig(cps=8, max_sentence_words=3, keyword_seed=2)
    text, trace = hide(small_desk_model, b"forced stop", config)
    assert max(len(s) for s in text) == 3
    assert any(len(s) == 3 for s in text)
    assert reveal(small_desk_model, text, config) == b"forced stop"


@pytest.mark.parametrize("coding", ["huffman", "fixed"])
@pytest.mark.parametrize("cps", [2, 3, 4, 8, 16, 32, 64])
def test_roundtrip_desk(small_desk_model, cps, coding):
    rng = random.Random(cps)
    for _ in range(5):
        data = rng.randbytes(rng.randint(0, 200))
        config = EmbedConfig(cps=cps, keyword_seed=rng.getrandbits(64), coding=coding)
        text, _ = hide(small_desk_model, data, config)
        assert reveal(small_desk_model, text, config) == data


@settings(max_examples=60, deadline=None)
@given(st.binary(max_size=300), st.sampled_from([2, 4, 8, 16, 32, 64]), st.integers(0, 2**64 - 1))
def test_roundtrip_property(small_desk_model, data, cps, seed):
    config = EmbedConfig(cps=cps, keyword_seed=seed)
    text, _ = hide(small_desk_model, data, config)
    assert reveal(small_desk_model, text, config) == data


def test_roundtrip_through_text_format(small_desk_model):
    config = EmbedConfig(cps=8, keyword_seed=4)
    text, _ = hide(small_desk_model, b"\x00\x01\x02 format", config)
    assert parse_text(format_text(text)) == text
    assert reveal(small_desk_model, parse_text(format_text(text)), config) == b"\x00\x01\x02 format"


def test_seed_independence(small_desk_model):
    texts = []
    for seed in (1, 2):
        config = EmbedConfig(cps=8, keyword_seed=seed)
        text, _ = hide(small_desk_model, b"same payload", config)
        assert reveal(small_desk_model, text, config) == b"same payload"
        texts.append(text)
    assert texts[0] != texts[1]


def test_unseeded_embed_still_roundtrips(small_desk_model):
    config = EmbedConfig(cps=4)
    text, _ = hide(small_desk_model, b"no seed", config)
    assert reveal(small_desk_model, text, config) == b"no seed"


def test_seeded_embed_is_reproducible(small_desk_model):
    config = EmbedConfig(cps=16, keyword_seed=77)
    assert hide(small_desk_model, b"repeat", config) == hide(small_desk_model, b"repeat", config)


@pytest.mark.parametrize("coding", ["huffman", "fixed"])
def test_untraced_embed_produces_the_same_text(small_desk_model, coding):
    config = EmbedConfig(cps=32, keyword_seed=5, coding=coding)
    traced, trace = hide(small_desk_model, b"same words either way", config)
    plain, none = hide(small_desk_model, b"same words either way", config, record=False)
    assert plain == traced and none is None and trace.step_count > 0


def test_keyword_carries_no_bits(small_desk_model):
    config = EmbedConfig(cps=8, keyword_seed=3)
    text, trace = hide(small_desk_model, b"keyword check", config)
    keywords = {small_desk_model.dictionary.word(k) for k in small_desk_model.keywords}
    for sentence, steps in zip(text, trace.sentences):
        assert sentence[0] in keywords
        expected_steps = len(sentence) - 1 + (len(sentence) < config.max_sentence_words)
        assert len(steps) == expected_steps
        assert steps[0].context == small_desk_model.start_context(small_desk_model.dictionary.id_of(sentence[0]))


def test_generated_transitions_were_observed(small_desk_model):
    model = small_desk_model
    text, _ = hide(model, bytes(range(100)), EmbedConfig(cps=32, keyword_seed=8))
    for sentence in text:
        seq = [BOS] * model.order + model.dictionary.encode(sentence)
        for pos in range(model.order, len(seq)):
            context = tuple(seq[pos - model.order : pos])
            seen = any(
                (d := model.distribution_at(context, k)) is not None and d.count(seq[pos])
                for k in range(model.order, 0, -1)
            )
            assert seen


@pytest.mark.parametrize("cps", [2, 4, 8, 16])
def test_bpw_bound(small_desk_model, cps):
    text, trace = hide(small_desk_model, random.Random(cps).randbytes(2000), EmbedConfig(cps=cps, keyword_seed=0))
    assert trace.bits_coded / trace.step_count <= math.log2(cps)


def test_trace_accounts_for_all_bits(small_desk_model):
    config = EmbedConfig(cps=16, keyword_seed=6)
    framed = frame_payload(Payload(b"accounting"))
    text, trace = embed(small_desk_model, framed, config)
    assert trace.payload_bits == len(framed)
    assert sum(s.code_length for s in trace.steps) == trace.bits_coded >= len(framed)
