"""Hypothesis strategies shared by the test modules."""
from hypothesis import strategies as st

from chaindiam.chains import Finite, Int, LexProd, Nat, NatStar, Rat, Real, Rev, Sum


def chain_terms(reals: bool = True, max_leaves: int = 6):
    atoms = [st.builds(Finite, st.integers(0, 4)), st.just(Nat()), st.just(NatStar()),
             st.just(Int()), st.just(Rat())]
    if reals:
        atoms.append(st.just(Real()))
    return st.recursive(
        st.one_of(atoms),
        lambda kids: st.one_of(
            st.builds(Sum, kids, kids),
            st.builds(LexProd, kids, kids),
            st.builds(Rev, kids),
        ),
        max_leaves=max_leaves,
    )
