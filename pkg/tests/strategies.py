"""Hypothesis strategies for poles, scales and orders."""

from fractions import Fraction

from hypothesis import strategies as st

from bdm.exact import exact

re_part = st.floats(min_value=0.2, max_value=5.0)
im_part = st.floats(min_value=-3.0, max_value=3.0)
poles = st.builds(complex, re_part, im_part)
sigmas = st.floats(min_value=0.3, max_value=4.0)
orders = st.integers(min_value=1, max_value=4)
coeffs = st.builds(complex, st.floats(-2, 2), st.floats(-2, 2))

small_rationals = st.fractions(min_value=Fraction(1, 4), max_value=Fraction(4), max_denominator=12)
exact_poles = st.builds(
    lambda r, i: exact(r) + exact(i) * exact(1j),
    small_rationals,
    st.fractions(min_value=Fraction(-3), max_value=Fraction(3), max_denominator=12),
)
