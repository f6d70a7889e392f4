import itertools

import pytest

from ostrowski import ContinuedFraction, decode, encode, is_valid, words
from ostrowski.errors import CfMismatch


def valid_words(cf, length):
    """Brute-force oracle: every valid digit word of exactly this length
    (leading zeros allowed), generated from the digit constraints alone."""
    caps = [cf.partial_quotient(k) for k in range(1, length + 1)]
    for digits in itertools.product(*[range(caps[k] + 1) for k in range(length)]):
        if digits and digits[0] >= caps[0]:
            continue
        if any(digits[k] == caps[k] and digits[k - 1] != 0 for k in range(1, length)):
            continue
        yield digits


def test_uniqueness_brute_force(any_cf):
    # Valid words of length L decode bijectively onto [0, q_L).
    for length in range(0, 11):
        values = sorted(decode(any_cf, w) for w in valid_words(any_cf, length))
        q_l = any_cf.convergent_denominators(length)[length]
        assert values == list(range(q_l))


def brute_force_encoding(cf, n, max_len=10):
    matches = [
        w
        for length in range(max_len + 1)
        for w in valid_words(cf, length)
        if decode(cf, w) == n and (not w or w[-1] != 0)
    ]
    assert len(matches) == 1
    return matches[0]


def test_encode_examples_against_brute_force(golden, sqrt2):
    assert encode(golden, 10).digits == brute_force_encoding(golden, 10)
    assert str(encode(golden, 10)) == "1 0 0 1 0 0"
    assert encode(sqrt2, 3).digits == brute_force_encoding(sqrt2, 3)
    assert str(encode(sqrt2, 3)) == "1 1"


def test_encode_zero_is_empty(any_cf):
    w = encode(any_cf, 0)
    assert w.digits == ()
    assert str(w) == "0"


def test_encode_matches_brute_force(any_cf):
    for n in range(0, 40):
        assert encode(any_cf, n).digits == brute_force_encoding(any_cf, n)


def test_decode_examples(golden, sqrt2):
    assert decode(golden, words.from_text("1 0 0 1 0 0")) == 10
    assert decode(golden, (0,) * 7) == 0
    assert decode(sqrt2, words.from_text("1 1")) == 3


def test_decode_accepts_invalid_words(golden):
    # Intermediate pass words are not valid representations but have values.
    assert decode(golden, words.from_text("0 1 1 0 0")) == 5
    assert decode(golden, words.from_text("3 3")) == 3 * 1 + 3 * 1


def test_is_valid_examples(golden):
    assert is_valid(golden, words.from_text("1 0 0 1 0 0"))
    assert not is_valid(golden, words.from_text("1"))  # b_1 must be < a_1 = 1
    assert not is_valid(golden, words.from_text("1 1 0"))  # cap followed by nonzero


def test_is_valid_allows_leading_zeros(any_cf):
    w = encode(any_cf, 17).digits + (0, 0, 0)
    assert is_valid(any_cf, w)


def test_round_trip(any_cf):
    for n in range(10**4 + 1):
        assert decode(any_cf, encode(any_cf, n).digits) == n


def test_greedy_leading_digit(any_cf):
    # Most significant nonzero digit sits at position k+1 for the largest
    # q_k <= N, except when a_1 = 1 ties q_0 = q_1 (N = b*q_0 cases shift up).
    qs = any_cf.convergent_denominators(30)
    for n in range(1, 2000):
        digits = encode(any_cf, n).digits
        top = len(digits)  # position of the leading nonzero digit
        k = max(i for i in range(len(qs)) if qs[i] <= n)
        if any_cf.partial_quotient(1) == 1 and n == 1:
            assert top == 2
        else:
            assert top == k + 1


def test_word_text_round_trip():
    assert words.from_text("12 0 3") == (3, 0, 12)
    assert words.to_text((3, 0, 12)) == "12 0 3"
    assert words.to_text(()) == "0"
    with pytest.raises(ValueError, match="x2"):
        words.from_text("1 x2")


def test_word_addition_operator(golden):
    assert (encode(golden, 2) + encode(golden, 3)).value() == 5


def test_cf_mismatch(golden, sqrt2):
    with pytest.raises(CfMismatch):
        encode(golden, 2) + encode(sqrt2, 3)
