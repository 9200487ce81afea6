"""Spelling length: the free-group invariant behind the energy lower bound.

The spelling length of a word is the least number of conjugated generators
multiplying to it.  An interval dynamic program computes it exactly, an
optimal pairing of inverse letters certifies it, and bounded searches over
products of conjugacy classes reproduce the certified class bounds.
"""

from octfield import (
    ClassProductSpec,
    OctantTopology,
    certified_lower_bound,
    min_spelling_over_product,
    optimal_pairing,
    spelling_length,
    spelling_lower_bound_check,
    word,
)
from octfield.words import format_word, parse_word

# the commutator needs two factors even though all degrees vanish
u = parse_word("a b a' b'")
print(f"lambda({format_word(u)}) = {spelling_length(u)}")
print("optimal pairing:", sorted(tuple(sorted(p)) for p in optimal_pairing(u)))

# a conjugated letter is one factor no matter how long the conjugator
v = parse_word("a b' c b c' a' c a b a' c' b a' b' c'", alphabet_size=3)
print(f"lambda of a 15-letter word: {spelling_length(v)}")

# certified bound for the class product <A B C> <(CBA)^-1>: exactly two
print("certified bound:", certified_lower_bound(1, 1, 1, 0, 1, "P"))
result = min_spelling_over_product(
    ClassProductSpec(
        base=word(3, (1, 2, 3)),
        factors=((word(3, (-1, -2, -3)), 1),),
        search_budget=3,
    )
)
print(f"search: upper={result.upper}, lower={result.lower}, "
      f"witness={format_word(result.witness)}, exact={result.exact}")

# the full free-group machinery certifies the energy of the running example
t = OctantTopology((1, 1, 1), (1, 1, 1), 3)
print(f"energy bound from boundary words: {spelling_lower_bound_check(t)} pi")
