"""Free-group words, spelling length, and conjugacy-product minimization.

A word is an immutable sequence of signed integers: letter ``+g`` is the
g-th generator and ``-g`` its inverse (1-based, ``g <= alphabet_size``).
The spelling length ``lambda`` of a word is the minimal number of factors
in any factorization of the corresponding group element into conjugates
of generators and inverse generators; it is computed here by an interval
dynamic program and descends to the free group.

Text format for words: generators as lowercase letters ``a b c ...`` or
``c1 c2 ...``, inverses with a trailing apostrophe, the empty word as
``e``.  Example: ``"a b a' b'"``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

__all__ = [
    "Word",
    "Pairing",
    "ClassProductSpec",
    "SearchResult",
    "word",
    "free_reduce",
    "inverse",
    "concat",
    "conjugate",
    "generator_degree",
    "generator_degrees",
    "abelian_bound",
    "spelling_length",
    "optimal_pairing",
    "pairing_is_valid",
    "apply_homomorphism",
    "cyclic_canonical",
    "certified_lower_bound",
    "min_spelling_over_product",
    "reduced_words",
    "parse_word",
    "format_word",
]


@dataclass(frozen=True)
class Word:
    """An immutable word over the alphabet of N generators and inverses."""

    alphabet_size: int
    letters: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if self.alphabet_size < 1:
            raise ValueError("alphabet_size must be >= 1")
        for letter in self.letters:
            if letter == 0 or abs(letter) > self.alphabet_size:
                raise ValueError(f"letter {letter} outside alphabet of size {self.alphabet_size}")

    def __len__(self) -> int:
        return len(self.letters)

    def __str__(self) -> str:
        return format_word(self)


# A pairing is a set of unordered pairs of 1-based letter positions.
Pairing = frozenset


def word(alphabet_size: int, letters=()) -> Word:
    return Word(alphabet_size, tuple(letters))


def free_reduce(u: Word) -> Word:
    """Cancel all adjacent inverse pairs; the result is the unique reduced form."""
    stack: list[int] = []
    for letter in u.letters:
        if stack and stack[-1] == -letter:
            stack.pop()
        else:
            stack.append(letter)
    return Word(u.alphabet_size, tuple(stack))


def inverse(u: Word) -> Word:
    """Reversed word with every letter's sign flipped."""
    return Word(u.alphabet_size, tuple(-letter for letter in reversed(u.letters)))


def concat(*parts: Word) -> Word:
    if not parts:
        raise ValueError("concat needs at least one word")
    n = parts[0].alphabet_size
    letters: list[int] = []
    for p in parts:
        if p.alphabet_size != n:
            raise ValueError("cannot concatenate words over different alphabets")
        letters.extend(p.letters)
    return Word(n, tuple(letters))


def conjugate(u: Word, h: Word) -> Word:
    """h u h^-1, freely reduced."""
    return free_reduce(concat(h, u, inverse(h)))


def generator_degree(u: Word, g: int) -> int:
    """Signed count of occurrences of generator g (positive minus inverse)."""
    if not 1 <= g <= u.alphabet_size:
        raise ValueError(f"generator {g} outside alphabet")
    return sum(1 if letter == g else -1 if letter == -g else 0 for letter in u.letters)


def generator_degrees(u: Word) -> tuple[int, ...]:
    degs = [0] * u.alphabet_size
    for letter in u.letters:
        degs[abs(letter) - 1] += 1 if letter > 0 else -1
    return tuple(degs)


def abelian_bound(u: Word) -> int:
    """Sum of |degree| over generators; a lower bound for the spelling length."""
    return sum(abs(d) for d in generator_degrees(u))


def _cyclic_reduce(letters: tuple[int, ...]) -> tuple[int, ...]:
    reduced = free_reduce(Word(26 if not letters else max(abs(x) for x in letters), letters)).letters \
        if letters else ()
    while len(reduced) >= 2 and reduced[0] == -reduced[-1]:
        reduced = reduced[1:-1]
        # interior may expose new adjacent cancellations
        w = []
        for letter in reduced:
            if w and w[-1] == -letter:
                w.pop()
            else:
                w.append(letter)
        reduced = tuple(w)
    return reduced


def cyclic_canonical(u: Word) -> tuple[int, ...]:
    """Canonical representative of the conjugacy class: cyclically reduced,
    lexicographically smallest rotation (letters ordered 1, -1, 2, -2, ...)."""
    letters = _cyclic_reduce(u.letters)
    if not letters:
        return ()

    def key(seq):
        return [2 * abs(x) - (x > 0) for x in seq]

    n = len(letters)
    return min((letters[i:] + letters[:i] for i in range(n)), key=key)


_LAMBDA_CACHE: dict[tuple[int, ...], int] = {}


def _lambda_dp(w: tuple[int, ...]) -> list[list[int]]:
    """Interval DP table: lam[i][j] = spelling length of w[i:j]."""
    k = len(w)
    lam = [[0] * (k + 1) for _ in range(k + 1)]
    for span in range(1, k + 1):
        for i in range(k - span + 1):
            j = i + span
            row = lam[i + 1]
            first = -w[i]
            best = 1 + row[j]
            for t in range(i + 1, j):
                if w[t] == first:
                    cand = row[t] + lam[t + 1][j]
                    if cand < best:
                        best = cand
            lam[i][j] = best
    return lam


def spelling_length(u: Word) -> int:
    """Minimal factor count over all spellings of [u] into conjugated letters.

    Computed by the interval recursion
    lambda(U) = min(1 + lambda(U[1:]), min_{U[t] = U[0]^-1} lambda(U[1:t]) + lambda(U[t+1:])),
    which is invariant under free reduction and cyclic rotation; both facts are
    exploited for caching.
    """
    canon = cyclic_canonical(u)
    hit = _LAMBDA_CACHE.get(canon)
    if hit is not None:
        return hit
    value = _lambda_dp(canon)[0][len(canon)]
    _LAMBDA_CACHE[canon] = value
    return value


def optimal_pairing(u: Word) -> Pairing:
    """A pairing of mutually inverse letters realizing the spelling length.

    Pairs are unordered 1-based index pairs; intervals are nested or disjoint
    and L(u) - 2|pairs| = spelling_length(u).  Ties in the DP prefer the
    smallest partner index.
    """
    w = u.letters
    k = len(w)
    lam = _lambda_dp(w)
    pairs: set[tuple[int, int]] = set()
    stack = [(0, k)]
    while stack:
        i, j = stack.pop()
        if j - i <= 0:
            continue
        target = lam[i][j]
        paired = False
        for t in range(i + 1, j):
            if w[t] == -w[i] and lam[i + 1][t] + lam[t + 1][j] == target:
                pairs.add((i + 1, t + 1))
                stack.append((i + 1, t))
                stack.append((t + 1, j))
                paired = True
                break
        if not paired:
            # w[i] contributes a factor of its own
            stack.append((i + 1, j))
    return frozenset(pairs)


def pairing_is_valid(u: Word, pairing) -> bool:
    """Check conditions: paired letters are mutual inverses, intervals nested
    or disjoint, no index in two pairs."""
    seen: set[int] = set()
    intervals = []
    for pair in pairing:
        a, b = sorted(pair)
        if not (1 <= a < b <= len(u.letters)):
            return False
        if u.letters[a - 1] != -u.letters[b - 1]:
            return False
        if a in seen or b in seen:
            return False
        seen.update((a, b))
        intervals.append((a, b))
    for (a1, b1), (a2, b2) in itertools.combinations(intervals, 2):
        disjoint = b1 < a2 or b2 < a1
        nested = (a1 < a2 and b2 < b1) or (a2 < a1 and b1 < b2)
        if not (disjoint or nested):
            return False
    return True


def apply_homomorphism(u: Word, images: list[Word]) -> Word:
    """Substitute images[g-1] for each generator g (inverses map to inverse
    images) and freely reduce."""
    if len(images) < u.alphabet_size:
        raise ValueError("an image is required for every generator")
    target_n = images[0].alphabet_size if images else u.alphabet_size
    letters: list[int] = []
    for letter in u.letters:
        img = images[abs(letter) - 1]
        if img.alphabet_size != target_n:
            raise ValueError("homomorphism images must share one alphabet")
        letters.extend(img.letters if letter > 0 else inverse(img).letters)
    return free_reduce(Word(target_n, tuple(letters)))


# ---------------------------------------------------------------------------
# Certified lower bounds and conjugacy-product search
# ---------------------------------------------------------------------------

def certified_lower_bound(i: int, j: int, k: int, p: int, n: int, variant: str = "P") -> int:
    """Certified lower bound for min spelling length over the set product
    <A^i B^j C^k> <F>^p <F^-1>^n with F = CBA (variant "P") or F = ABC
    (variant "Q").

    Combines the combinatorial bound (i+j+k-(p+n) for P, i+j+k-(p+n+2) for Q),
    the abelian bound from generator degrees, and nonnegativity; the result is
    then raised by one if its parity disagrees with the sum of degrees.
    """
    if variant not in ("P", "Q"):
        raise ValueError("variant must be 'P' or 'Q'")
    if min(i, j, k, p, n) < 0:
        raise ValueError("arguments must be non-negative")
    shape = i + j + k - (p + n) if variant == "P" else i + j + k - (p + n + 2)
    crude = i + j + k + 3 * (p - n)
    degs = (i + p - n, j + p - n, k + p - n)
    abelian = sum(abs(d) for d in degs)
    lower = max(shape, crude, abelian, 0)
    if lower % 2 != abelian % 2:
        lower += 1
    return lower


@dataclass(frozen=True)
class ClassProductSpec:
    """Set product {base} <f1>^m1 <f2>^m2 ... of a word with conjugacy classes.

    ``factors`` lists (word, multiplicity) pairs; the search conjugates each
    factor occurrence by words of at most ``search_budget`` letters.
    """

    base: Word
    factors: tuple = ()
    search_budget: int = 3

    def __post_init__(self) -> None:
        if self.search_budget < 0:
            raise ValueError("search_budget must be >= 0")
        for f, mult in self.factors:
            if f.alphabet_size != self.base.alphabet_size:
                raise ValueError("all words must share one alphabet")
            if mult < 0:
                raise ValueError("multiplicities must be non-negative")


@dataclass(frozen=True)
class SearchResult:
    upper: int
    lower: int
    witness: Word
    exact: bool
    budget_exhausted: bool
    conjectured_lower: int | None = None

    def __post_init__(self) -> None:
        if self.lower > self.upper:
            raise ValueError("certified lower bound exceeds searched upper bound")


def reduced_words(alphabet_size: int, max_len: int):
    """All freely reduced words of length <= max_len, by (length, lex) order.

    Letters are ordered 1, -1, 2, -2, ... as in the canonical form.
    """
    order = [g for i in range(1, alphabet_size + 1) for g in (i, -i)]
    frontier: list[tuple[int, ...]] = [()]
    yield ()
    for _ in range(max_len):
        nxt = []
        for w in frontier:
            for letter in order:
                if w and w[-1] == -letter:
                    continue
                nxt.append(w + (letter,))
        for w in nxt:
            yield w
        frontier = nxt


def _pq_shape(base: Word, classes: list[tuple[tuple[int, ...], int]]):
    """Recognize the <A^i B^j C^k><F>^p<F^-1>^n shape; return
    (i, j, k, p, n, variant) or None."""
    if base.alphabet_size != 3:
        return None
    letters = free_reduce(base).letters
    counts = [0, 0, 0]
    pos = 0
    for g in (1, 2, 3):
        while pos < len(letters) and letters[pos] == g:
            counts[g - 1] += 1
            pos += 1
    if pos != len(letters):
        return None
    cba = cyclic_canonical(word(3, (3, 2, 1)))
    cba_inv = cyclic_canonical(word(3, (-1, -2, -3)))
    abc = cyclic_canonical(word(3, (1, 2, 3)))
    abc_inv = cyclic_canonical(word(3, (-3, -2, -1)))
    p_cba = n_cba = p_abc = n_abc = 0
    for canon, mult in classes:
        if canon == cba:
            p_cba += mult
        elif canon == cba_inv:
            n_cba += mult
        elif canon == abc:
            p_abc += mult
        elif canon == abc_inv:
            n_abc += mult
        else:
            return None
    i, j, k = counts
    if p_abc == 0 and n_abc == 0:
        return (i, j, k, p_cba, n_cba, "P")
    if p_cba == 0 and n_cba == 0:
        return (i, j, k, p_abc, n_abc, "Q")
    return None


def min_spelling_over_product(spec: ClassProductSpec) -> SearchResult:
    """Search the set product for the minimal spelling length.

    The upper bound is the minimum of ``spelling_length`` over products
    base * h1 f1 h1^-1 * ... with conjugators enumerated as reduced words of
    at most ``search_budget`` letters (conjugators within one conjugacy class
    are unordered, since set products of conjugation-invariant sets commute).
    The lower bound is the certified value when the product matches the
    <A^i B^j C^k><CBA-type>^p<...>^n shape, else the abelian bound.  The
    search stops early once the certified bound is attained.
    """
    n_gen = spec.base.alphabet_size

    # Merge factor occurrences by conjugacy class (cyclic canonical form).
    merged: dict[tuple[int, ...], tuple[Word, int]] = {}
    order: list[tuple[int, ...]] = []
    for f, mult in spec.factors:
        if mult == 0:
            continue
        canon = cyclic_canonical(f)
        if canon in merged:
            merged[canon] = (merged[canon][0], merged[canon][1] + mult)
        else:
            merged[canon] = (f, mult)
            order.append(canon)
    classes = [(canon, merged[canon][1]) for canon in order]

    shape = _pq_shape(spec.base, classes)
    total_degrees = list(generator_degrees(spec.base))
    for canon, (f, mult) in merged.items():
        for g, d in enumerate(generator_degrees(f)):
            total_degrees[g] += mult * d
    abelian = sum(abs(d) for d in total_degrees)

    conjectured = None
    if shape is not None:
        i, j, k, p, n, variant = shape
        lower = certified_lower_bound(i, j, k, p, n, variant)
        if variant == "P" and p > 0:
            conjectured = i + j + k - n  # unproven strengthening; never certified
    else:
        lower = abelian

    conjugators = list(reduced_words(n_gen, spec.search_budget))
    assignments = itertools.product(
        *[
            itertools.combinations_with_replacement(range(len(conjugators)), mult)
            for _, mult in classes
        ]
    )

    def assignment_cost(assignment):
        return sum(len(conjugators[idx]) for combo in assignment for idx in combo)

    ordered = sorted(assignments, key=lambda a: (assignment_cost(a), a))

    best_lam: int | None = None
    best_witness: Word | None = None
    seen: set[tuple[int, ...]] = set()
    exhausted = True
    for assignment in ordered:
        letters: list[int] = list(spec.base.letters)
        for (canon, (f, mult)), combo in zip(merged.items(), assignment):
            for idx in combo:
                h = conjugators[idx]
                letters.extend(h)
                letters.extend(f.letters)
                letters.extend(-x for x in reversed(h))
        candidate = free_reduce(Word(n_gen, tuple(letters)))
        canon_c = cyclic_canonical(candidate)
        if canon_c in seen:
            continue
        seen.add(canon_c)
        lam = spelling_length(candidate)
        if best_lam is None or (lam, len(candidate.letters), candidate.letters) < (
            best_lam,
            len(best_witness.letters),
            best_witness.letters,
        ):
            best_lam = lam
            best_witness = candidate
        if best_lam == lower:
            exhausted = False
            break

    assert best_lam is not None and best_witness is not None
    return SearchResult(
        upper=best_lam,
        lower=lower,
        witness=best_witness,
        exact=best_lam == lower,
        budget_exhausted=exhausted and best_lam != lower,
        conjectured_lower=conjectured,
    )


# ---------------------------------------------------------------------------
# Text format
# ---------------------------------------------------------------------------

_LETTER_NAMES = "abcd"  # small alphabets print as letters, larger as c1..cN


def parse_word(text: str, alphabet_size: int | None = None) -> Word:
    """Parse the CLI text format: 'a b a' b'', 'c1 c2'', or 'e' for empty."""
    tokens = text.replace(",", " ").split()
    if tokens == ["e"] or not tokens:
        return Word(alphabet_size or 1, ())
    letters = []
    max_gen = 0
    for tok in tokens:
        inv = tok.endswith("'")
        name = tok[:-1] if inv else tok
        if name.startswith("c") and name[1:].isdigit():
            g = int(name[1:])
        elif len(name) == 1 and name in _LETTER_NAMES:
            g = _LETTER_NAMES.index(name) + 1
        else:
            raise ValueError(f"cannot parse letter {tok!r}")
        if g < 1:
            raise ValueError(f"cannot parse letter {tok!r}")
        max_gen = max(max_gen, g)
        letters.append(-g if inv else g)
    n = alphabet_size or max_gen
    return Word(n, tuple(letters))


def format_word(u: Word) -> str:
    if not u.letters:
        return "e"
    parts = []
    for letter in u.letters:
        g = abs(letter)
        name = _LETTER_NAMES[g - 1] if u.alphabet_size <= len(_LETTER_NAMES) else f"c{g}"
        parts.append(name + ("'" if letter < 0 else ""))
    return " ".join(parts)
