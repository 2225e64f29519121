from hypothesis import strategies as st

from graftlab.multiindex import MultiIndex


def multi_indices(max_trees=4, max_entry=3):
    return st.lists(st.integers(1, max_entry), min_size=1, max_size=max_trees).map(MultiIndex)


@st.composite
def glueable(draw, max_trees=3, max_entry=3):
    """``(k1, k0)`` with ``len(k1) == sum(k0)``."""
    k0 = draw(multi_indices(max_trees, max_entry))
    k1 = draw(st.lists(st.integers(1, max_entry), min_size=sum(k0), max_size=sum(k0)).map(MultiIndex))
    return k1, k0
