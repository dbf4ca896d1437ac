from hypothesis import strategies as st

small_rationals = st.fractions(min_value=-4, max_value=4, max_denominator=6)
nonzero_rationals = small_rationals.filter(bool)
