"""Stream derivation: frozen values, independence, and 64-bit wrapping."""

from sortline.rng import (
    AGENT_STREAM,
    INPUT_STREAM,
    OBSERVATION_STREAM,
    SORTING_STREAM,
    make_stream,
    stream_seed,
)

# Pinned on first verified run; any change to the derivation breaks replay
# of recorded traces and must be treated as a format break.
FROZEN_SEEDS = {
    INPUT_STREAM: 3844373776629344576,
    SORTING_STREAM: 12272839632411733525,
    OBSERVATION_STREAM: 17970853360492905283,
    AGENT_STREAM: 6473175807132277661,
}

FROZEN_FIRST_UNIFORMS = [0.3217689979154156, 0.40053215919220175, 0.3779370855516324]


def test_derivation_is_frozen():
    for label, expected in FROZEN_SEEDS.items():
        assert stream_seed(42, label) == expected


def test_first_draws_are_frozen():
    stream = make_stream(42, INPUT_STREAM)
    assert [stream.uniform(0.0, 1.0) for _ in range(3)] == FROZEN_FIRST_UNIFORMS


def test_same_label_reproduces_the_sequence():
    a = make_stream(7, SORTING_STREAM)
    b = make_stream(7, SORTING_STREAM)
    assert [a.random() for _ in range(20)] == [b.random() for _ in range(20)]


def test_labels_give_independent_streams():
    streams = {label: make_stream(7, label) for label in FROZEN_SEEDS}
    firsts = {label: s.random() for label, s in streams.items()}
    assert len(set(firsts.values())) == len(firsts)


def test_root_seeds_differ():
    assert stream_seed(1, INPUT_STREAM) != stream_seed(2, INPUT_STREAM)


def test_root_seed_wraps_to_64_bits():
    assert stream_seed(-1, INPUT_STREAM) == stream_seed((1 << 64) - 1, INPUT_STREAM)
    assert stream_seed(1 << 64, INPUT_STREAM) == stream_seed(0, INPUT_STREAM)
