"""Free words and Fox calculus: axioms, a worked example, random identity."""

import random

from hypothesis import given, strategies as st

from dslice.words import Word, FoxPolynomial, fox_derivative


def w(*pairs):
    return Word(tuple(pairs))


def test_free_reduction():
    assert w((0, 1), (0, -1)) == Word.identity()
    assert w((0, 1), (1, 1), (1, -1), (0, 1)).letters == ((0, 1), (0, 1))
    assert (w((0, 1)) * w((0, -1))) == Word.identity()


def test_inverse_and_conjugate():
    u = w((0, 1), (1, -1), (2, 1))
    assert (u * u.inverse()) == Word.identity()
    v = u.conjugate(w((1, 1)))
    assert v.letters[0] == (1, 1)


letters = st.lists(
    st.tuples(st.integers(min_value=0, max_value=3), st.sampled_from([1, -1])),
    max_size=12,
)


@given(letters, letters)
def test_mul_associative_via_reduction(a, b):
    x, y = Word(tuple(a)), Word(tuple(b))
    assert (x * y).letters == Word(tuple(a) + tuple(b)).letters


def test_fox_derivative_generator():
    x = Word.gen(0)
    d = fox_derivative(x, 0)
    assert d.as_dict() == {Word.identity(): 1}
    dinv = fox_derivative(x.inverse(), 0)
    assert dinv.as_dict() == {x.inverse(): -1}


def test_fox_derivative_worked_example():
    # d(x y x^-1)/dx = 1 - x y x^-1
    x, y = Word.gen(0), Word.gen(1)
    u = x * y * x.inverse()
    d = fox_derivative(u, 0)
    assert d.as_dict() == {Word.identity(): 1, u: -1}
    # product rule against a manual split
    v = y * x
    lhs = fox_derivative(u * v, 0)
    rhs = fox_derivative(u, 0) + fox_derivative(v, 0).left_mul(u)
    assert lhs == rhs


def _check_fundamental_identity(word: Word, ngens: int):
    total = FoxPolynomial.zero()
    for i in range(ngens):
        di = fox_derivative(word, i)
        xi = FoxPolynomial.from_dict({Word.gen(i): 1, Word.identity(): -1})
        total = total + di.word_mul(xi)
    expected = FoxPolynomial.from_dict({word: 1}) + FoxPolynomial.from_dict(
        {Word.identity(): -1}
    )
    assert total == expected


def test_fundamental_identity_random_words():
    rng = random.Random(7)
    for _ in range(300):
        n = rng.randint(1, 4)
        ltrs = tuple(
            (rng.randrange(n), rng.choice([1, -1]))
            for _ in range(rng.randint(0, 14))
        )
        _check_fundamental_identity(Word(ltrs), n)
