"""Tests for the presentation engine.

Smith normal form is cross-checked against sympy and a gcd-of-minors oracle;
class-2 collection against a pair-counting oracle; kernel rewriting against
hand-picked groups whose kernels are known.
"""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy import Matrix

from zetalink.groups import (
    BUILTIN_NAMES,
    AbelianInvariants,
    BadParameters,
    CyclicCharacter,
    GrammarError,
    IncompleteTable,
    NotEliminable,
    NotSurjective,
    Presentation,
    Word,
    abelianize,
    builtin_presentation,
    central_in_class2,
    consequence_search,
    derived_series_finite,
    k1hat_via_rewriting,
    kill_generators,
    reidemeister_schreier,
    smith_normal_form,
    tietze_eliminate,
    tietze_simplify,
    todd_coxeter,
)
from zetalink.groups.coset import CAP_EXCEEDED, COMPLETE
from zetalink.groups.presentation import format_word
from zetalink.groups.rewrite import CONSEQUENCE, UNKNOWN, _collect_class2
from zetalink.groups.snf import diagonal_of

from oracles import collect_class2_bruteforce, smith_diagonal_by_minors

# ---------------------------------------------------------------------------
# words


letters_st = st.lists(
    st.integers(min_value=-4, max_value=4).filter(lambda x: x != 0),
    max_size=12,
)


def test_free_reduction():
    assert Word((1, -1)).is_identity
    assert Word((1, 2, -2, -1)).is_identity
    assert Word((1, 2, -2, 3)).letters == (1, 3)


def test_word_rejects_zero_letter():
    with pytest.raises(ValueError):
        Word((1, 0))


def test_word_is_immutable():
    w = Word((1, 2))
    with pytest.raises(AttributeError):
        w.letters = ()


@given(letters_st)
def test_inverse_cancels(letters):
    w = Word(letters)
    assert (w * w.inverse()).is_identity
    assert (w.inverse() * w).is_identity


@given(letters_st, letters_st)
def test_product_inverse_reverses(a, b):
    u, v = Word(a), Word(b)
    assert (u * v).inverse() == v.inverse() * u.inverse()


@given(letters_st, st.integers(min_value=-4, max_value=4))
def test_pow_matches_repeated_product(letters, n):
    w = Word(letters)
    expected = Word.identity()
    step = w if n >= 0 else w.inverse()
    for _ in range(abs(n)):
        expected = expected * step
    assert w**n == expected


def test_commutator_and_conjugate_definitions():
    a, b = Word.generator(0), Word.generator(1)
    assert Word.commutator(a, b) == a * b * a.inverse() * b.inverse()
    assert a.conjugate(b) == b * a * b.inverse()


@given(letters_st)
def test_cyclic_reduction_conjugates_back(letters):
    w = Word(letters)
    core, s = w.cyclically_reduced()
    assert s * core * s.inverse() == w
    if len(core) >= 2:
        assert core.letters[0] != -core.letters[-1]


def test_rotations_are_cyclic_shifts():
    w = Word((1, 2, 3))
    rots = list(w.rotations())
    assert len(rots) == 3
    assert Word((2, 3, 1)) in rots
    assert list(Word().rotations()) == [Word()]


def test_exponent_sums_and_max_index():
    w = Word((1, 1, -2, 3, -1))
    assert w.exponent_sums(3) == (1, -1, 1)
    assert w.max_index() == 2
    assert Word().max_index() == -1


def test_substitute_expands_inverses():
    # replace b by a^2 in a*b^-1
    w = Word((1, -2)).substitute(1, Word((1, 1)))
    assert w == Word((1, -1, -1))


# ---------------------------------------------------------------------------
# grammar


def test_grammar_spec_example():
    p = Presentation.from_text("gens: a, b, c ; rels: a^2, [a,b], a*b*a^-1*b^-1")
    assert p.generators == ("a", "b", "c")
    assert len(p.relators) == 3
    assert p.relators[1] == p.relators[2]  # commutator sugar expands


def test_grammar_powers_parens_identity():
    p = Presentation.from_text("gens: a, b ; rels: (a*b)^-2, 1, [a, [a, b]]")
    assert p.relators[0] == (Word((1, 2)) ** -2)
    assert p.relators[1].is_identity
    inner = Word.commutator(Word((1,)), Word((2,)))
    assert p.relators[2] == Word.commutator(Word((1,)), inner)


def test_text_round_trip_on_catalog():
    for name in BUILTIN_NAMES:
        kwargs = {}
        if name in ("Gtilde", "K1hat", "Ktilde", "TriplePoint"):
            kwargs["d"] = 4
        if name == "Kh":
            kwargs["d"], kwargs["h"] = 4, 2
        p = builtin_presentation(name, **kwargs)
        again = Presentation.from_text(p.to_text())
        assert again.generators == p.generators
        assert again.relators == p.relators


def test_json_round_trip():
    p = builtin_presentation("B3S2")
    q = Presentation.from_json(p.to_json())
    assert q == p
    assert q.metadata["family"] == "B3S2"


@pytest.mark.parametrize(
    "text",
    [
        "rels: a",  # missing gens
        "gens: a ; rels: b",  # unknown generator
        "gens: a ; rels: a^x",  # non-integer exponent
        "gens: a, a ; rels: a",  # duplicate name
        "gens: 1 ; rels:",  # reserved name
        "gens: a ; rels: a)",  # trailing garbage
        "gens: a ; rels: [a a]",  # missing comma
    ],
)
def test_grammar_rejects(text):
    with pytest.raises(GrammarError):
        Presentation.from_text(text)


def test_word_helper_uses_presentation_names():
    p = Presentation.from_text("gens: u, v ; rels:")
    assert p.word("u*v^-1") == Word((1, -2))
    with pytest.raises(GrammarError):
        p.word("w")


# ---------------------------------------------------------------------------
# cyclic characters


def test_character_well_definedness():
    s3 = Presentation.from_text("gens: a, b ; rels: a^2, b^3, (a*b)^2")
    chi = CyclicCharacter(s3, 2, {"a": 1})
    assert chi.value(s3.word("a*b")) == 1
    assert chi.unit_generator() == 0
    with pytest.raises(BadParameters):
        CyclicCharacter(s3, 2, {"b": 1})  # b^3 -> 3 != 0 mod 2


def test_character_no_unit_generator():
    c4 = Presentation.from_text("gens: a ; rels: a^4")
    chi = CyclicCharacter(c4, 2, {"a": 0})
    with pytest.raises(NotSurjective):
        chi.unit_generator()


# ---------------------------------------------------------------------------
# Smith normal form


small_matrix_st = st.integers(min_value=1, max_value=4).flatmap(
    lambda m: st.integers(min_value=1, max_value=4).flatmap(
        lambda n: st.lists(
            st.lists(st.integers(min_value=-9, max_value=9), min_size=n, max_size=n),
            min_size=m,
            max_size=m,
        )
    )
)


def test_snf_frozen_example():
    D, U, V = smith_normal_form([[2, 4], [6, 8]])
    assert diagonal_of(D) == [2, 4]


@given(small_matrix_st)
def test_snf_transforms_are_unimodular(rows):
    D, U, V = smith_normal_form(rows)
    A, MU, MV, MD = Matrix(rows), Matrix(U), Matrix(V), Matrix(D)
    assert MU * A * MV == MD
    assert abs(MU.det()) == 1
    assert abs(MV.det()) == 1


@given(small_matrix_st)
def test_snf_diagonal_divisibility(rows):
    D, _, _ = smith_normal_form(rows)
    diag = diagonal_of(D)
    assert all(d >= 0 for d in diag)
    nonzero = [d for d in diag if d != 0]
    # zeros come after all nonzero entries
    assert diag[: len(nonzero)] == nonzero
    for a, b in zip(nonzero, nonzero[1:]):
        assert b % a == 0
    # off-diagonal entries vanish
    assert all(
        D[i][j] == 0 for i in range(len(D)) for j in range(len(D[0])) if i != j
    )


@settings(max_examples=50)
@given(
    st.integers(min_value=1, max_value=3).flatmap(
        lambda m: st.integers(min_value=1, max_value=3).flatmap(
            lambda n: st.lists(
                st.lists(st.integers(min_value=-6, max_value=6), min_size=n, max_size=n),
                min_size=m,
                max_size=m,
            )
        )
    )
)
def test_snf_matches_minor_gcd_oracle(rows):
    D, _, _ = smith_normal_form(rows)
    nonzero = [d for d in diagonal_of(D) if d != 0]
    assert nonzero == smith_diagonal_by_minors(rows)


def test_abelian_invariants_validation():
    with pytest.raises(ValueError):
        AbelianInvariants(-1)
    with pytest.raises(ValueError):
        AbelianInvariants(0, (1,))
    with pytest.raises(ValueError):
        AbelianInvariants(0, (4, 2))
    assert str(AbelianInvariants(0)) == "1"
    assert str(AbelianInvariants(1)) == "Z"
    assert str(AbelianInvariants(2, (2, 4))) == "Z^2 x Z/2 x Z/4"


def sympy_invariants(presentation):
    """Independent abelianization: literal letter counts plus sympy's SNF."""
    n = presentation.num_generators
    rows = []
    for relator in presentation.relators:
        row = [0] * n
        for letter in relator.letters:
            row[abs(letter) - 1] += 1 if letter > 0 else -1
        rows.append(row)
    if not rows:
        return AbelianInvariants(n)
    from sympy.matrices.normalforms import smith_normal_form as snf

    D = snf(Matrix(rows))
    diag = [abs(D[i, i]) for i in range(min(D.shape))]
    nonzero = [d for d in diag if d != 0]
    return AbelianInvariants(n - len(nonzero), tuple(d for d in nonzero if d > 1))


EXPECTED_ABELIANIZATIONS = [
    (("G", {}), "Z^5"),
    (("Gtilde", {"d": 2}), "Z^2 x Z/2 x Z/2 x Z/2"),
    (("Gtilde", {"d": 3}), "Z^2 x Z/3 x Z/3 x Z/3"),
    (("Gtilde", {"d": 6}), "Z^2 x Z/6 x Z/6 x Z/6"),
    (("K1hat", {"d": 2}), "Z^2 x Z/2"),
    (("K1hat", {"d": 5}), "Z^2 x Z/5"),
    (("Ktilde", {"d": 2}), "Z^3"),
    (("Ktilde", {"d": 4}), "Z^5"),
    (("Kh", {"d": 4, "h": 2}), "Z^3"),
    (("Kh", {"d": 6, "h": 1}), "Z^3"),
    (("TriplePoint", {"d": 4}), "Z^3"),
    (("TriplePoint", {"d": 6}), "Z^3"),
    (("B3S2", {}), "Z/4"),
    (("Artin244", {}), "Z^3"),
]


@pytest.mark.parametrize("spec,expected", EXPECTED_ABELIANIZATIONS)
def test_builtin_abelianizations(spec, expected):
    name, kwargs = spec
    p = builtin_presentation(name, **kwargs)
    inv = abelianize(p)
    assert str(inv) == expected
    assert inv == sympy_invariants(p)


# ---------------------------------------------------------------------------
# catalog


def test_builtin_names_and_bad_parameters():
    assert set(BUILTIN_NAMES) == {
        "G",
        "Gtilde",
        "K1hat",
        "Ktilde",
        "Kh",
        "TriplePoint",
        "B3S2",
        "Artin244",
    }
    for args in [
        ("K1hat", None, None),
        ("Kh", 4, 4),
        ("Kh", 4, 0),
        ("TriplePoint", 3, None),
        ("Gtilde", 1, None),
        ("unheard-of", None, None),
    ]:
        with pytest.raises(BadParameters):
            builtin_presentation(args[0], args[1], args[2])


def test_builtin_relator_counts():
    assert len(builtin_presentation("G").relators) == 6
    for d in (2, 3, 5):
        assert len(builtin_presentation("Gtilde", d).relators) == 9
        assert len(builtin_presentation("K1hat", d).relators) == 6 + (d - 1)
        assert len(builtin_presentation("Ktilde", d).relators) == d * d + d + 2
    assert len(builtin_presentation("TriplePoint", 4).relators) == 12
    assert len(builtin_presentation("B3S2").relators) == 2
    assert len(builtin_presentation("Artin244").relators) == 3


def test_catalog_records_transcription_corrections():
    for name, d in (("K1hat", 3), ("Ktilde", 3)):
        notes = builtin_presentation(name, d).metadata["corrections"]
        assert notes, f"{name} should flag its corrected relators"


def test_k1hat_contains_the_power_relator():
    p = builtin_presentation("K1hat", 3)
    assert p.word("(xt*ell*x)^3*yt") in p.relators


def test_gtilde_boundary_relator():
    p = builtin_presentation("Gtilde", 2)
    winf = p.word("(xt*ell*x*yt*y)^-1")
    assert winf**2 in p.relators


# ---------------------------------------------------------------------------
# Todd-Coxeter


def test_coset_enumeration_small_orders():
    assert todd_coxeter(Presentation.from_text("gens: a ; rels: a^5")).index == 5
    s3 = Presentation.from_text("gens: a, b ; rels: a^2, b^3, (a*b)^2")
    assert todd_coxeter(s3).index == 6
    a4 = Presentation.from_text("gens: a, b ; rels: a^2, b^3, (a*b)^3")
    assert todd_coxeter(a4).index == 12


def test_coset_enumeration_subgroup_index():
    s3 = Presentation.from_text("gens: a, b ; rels: a^2, b^3, (a*b)^2")
    table = todd_coxeter(s3, subgroup=[s3.word("a")])
    assert table.index == 3
    z = Presentation.from_text("gens: a ; rels:")
    assert todd_coxeter(z, subgroup=[z.word("a^5")]).index == 5


def test_generator_permutations_respect_relators():
    s3 = Presentation.from_text("gens: a, b ; rels: a^2, b^3, (a*b)^2")
    table = todd_coxeter(s3)
    pa = table.generator_permutation(0)
    pb = table.generator_permutation(1)
    assert sorted(pa) == list(range(6)) and sorted(pb) == list(range(6))
    # a^2 acts trivially
    assert all(pa[pa[c]] == c for c in range(6))


def test_cap_exceeded_is_reported_not_raised():
    free = Presentation.from_text("gens: a, b ; rels:")
    table = todd_coxeter(free, cap=10)
    assert table.status == CAP_EXCEEDED
    with pytest.raises(IncompleteTable):
        table.index
    assert table.to_json()["table"] is None


def test_sphere_braid_group_order_and_series():
    table = todd_coxeter(builtin_presentation("B3S2"))
    assert table.status == COMPLETE
    assert table.index == 12
    assert derived_series_finite(table) == [12, 3, 1]


def test_derived_series_other_groups():
    s3 = Presentation.from_text("gens: a, b ; rels: a^2, b^3, (a*b)^2")
    assert derived_series_finite(todd_coxeter(s3)) == [6, 3, 1]
    a4 = Presentation.from_text("gens: a, b ; rels: a^2, b^3, (a*b)^3")
    assert derived_series_finite(todd_coxeter(a4)) == [12, 4, 1]
    c5 = Presentation.from_text("gens: a ; rels: a^5")
    assert derived_series_finite(todd_coxeter(c5)) == [5, 1]


# ---------------------------------------------------------------------------
# Reidemeister-Schreier


def test_kernel_of_s3_sign_map_is_cyclic_of_order_3():
    s3 = Presentation.from_text("gens: a, b ; rels: a^2, b^3, (a*b)^2")
    k = reidemeister_schreier(s3, CyclicCharacter(s3, 2, {"a": 1}))
    assert len(k.generators) == 2 * 2 - 1  # Schreier count: d*n - (d-1)
    assert str(abelianize(k)) == "Z/3"
    assert k.metadata["kind"] == "cyclic-kernel"
    assert k.metadata["transversal_generator"] == "a"


@pytest.mark.parametrize(
    "text,d,images,expected",
    [
        ("gens: a ; rels: a^4", 2, {"a": 1}, "Z/2"),
        ("gens: a ; rels: a^6", 3, {"a": 1}, "Z/2"),
        ("gens: r, s ; rels: r^6, s^2, (r*s)^2", 2, {"s": 1}, "Z/6"),
    ],
)
def test_kernel_abelianizations(text, d, images, expected):
    p = Presentation.from_text(text)
    k = reidemeister_schreier(p, CyclicCharacter(p, d, images))
    assert str(abelianize(k)) == expected


@pytest.mark.parametrize("d", [2, 3, 4])
def test_schreier_generator_count_for_the_orbifold_cover(d):
    amb = builtin_presentation("Gtilde", d)
    k = reidemeister_schreier(amb, CyclicCharacter(amb, d, {"y": 1}))
    assert len(k.generators) == 5 * d - (d - 1)
    assert len(k.relators) == 9 * d


def test_rewriting_requires_a_unit_image():
    c4 = Presentation.from_text("gens: a ; rels: a^4")
    with pytest.raises(NotSurjective):
        reidemeister_schreier(c4, CyclicCharacter(c4, 2, {"a": 0}))


# ---------------------------------------------------------------------------
# Tietze moves


def test_eliminate_defined_generator():
    p = Presentation.from_text("gens: a, b ; rels: b*a^-2, b^3")
    q = tietze_eliminate(p, gen=1, relator=0)
    assert q.generators == ("a",)
    assert q.relators == (q.word("a^6"),)


def test_eliminate_rejects_repeated_occurrences():
    p = Presentation.from_text("gens: a, b ; rels: b*a*b*a, b^3")
    with pytest.raises(NotEliminable):
        tietze_eliminate(p, gen=1, relator=0)
    q = Presentation.from_text("gens: a, b ; rels: b^2*a")
    with pytest.raises(NotEliminable):
        tietze_eliminate(q, gen=1, relator=0)


def test_kill_generators_is_a_true_quotient():
    modular = Presentation.from_text("gens: a, b ; rels: a^2, b^3")
    q = kill_generators(modular, ["a"])
    assert q.generators == ("b",)
    assert str(abelianize(q)) == "Z/3"
    assert q.metadata["killed"] == ["a"]
    # killing a in S3 also kills b, because (a*b)^2 degenerates to b^2
    s3 = Presentation.from_text("gens: a, b ; rels: a^2, b^3, (a*b)^2")
    assert todd_coxeter(kill_generators(s3, ["a"])).index == 1


@pytest.mark.parametrize(
    "name,kwargs",
    [("K1hat", {"d": 2}), ("K1hat", {"d": 3}), ("Ktilde", {"d": 3}), ("B3S2", {})],
)
def test_simplification_preserves_abelian_invariants(name, kwargs):
    p = builtin_presentation(name, **kwargs)
    q = tietze_simplify(p)
    assert abelianize(q) == abelianize(p)


def test_simplify_respects_keep_list():
    p = Presentation.from_text("gens: a, b ; rels: b*a^-2")
    q = tietze_simplify(p, keep=("a",))
    assert "a" in q.generators


# ---------------------------------------------------------------------------
# consequence search


def test_consequence_examples():
    p = Presentation.from_text("gens: a, b ; rels: [a,b]")
    assert consequence_search(p, p.word("[a^2,b]"), depth=3) == CONSEQUENCE
    c = Presentation.from_text("gens: a ; rels: a^2")
    assert consequence_search(c, c.word("a^4"), depth=2) == CONSEQUENCE
    free = Presentation.from_text("gens: a, b ; rels:")
    assert consequence_search(free, free.word("[a,b]"), depth=6) == UNKNOWN


def test_consequence_relator_and_conjugates():
    p = builtin_presentation("B3S2")
    r = p.relators[0]
    assert consequence_search(p, r, depth=1) == CONSEQUENCE
    assert consequence_search(p, r.conjugate(p.word("s2")), depth=2) == CONSEQUENCE
    assert consequence_search(p, r.inverse(), depth=2) == CONSEQUENCE


def test_consequence_search_validates_depth():
    p = builtin_presentation("B3S2")
    with pytest.raises(ValueError):
        consequence_search(p, p.word("s1"), depth=0)


# ---------------------------------------------------------------------------
# class-2 centrality


@settings(max_examples=200)
@given(letters_st)
def test_class2_collection_matches_pair_counting(letters):
    n = 4
    word = Word(tuple(letters))
    a, c = _collect_class2(word, n)
    # free reduction inside Word() is harmless: it is a class-2 identity too
    a2, c2 = collect_class2_bruteforce(word.letters, n)
    assert list(a) == list(a2)
    full = {key: c.get(key, 0) for key in c2}
    assert full == c2


def test_central_in_class2_positive_and_negative():
    free2 = Presentation.from_text("gens: a, b ; rels:")
    assert not central_in_class2(free2, "a")
    abelian = Presentation.from_text("gens: a, b ; rels: [a,b]")
    assert central_in_class2(abelian, "a")
    assert central_in_class2(builtin_presentation("B3S2"), "s1")


@pytest.mark.parametrize("d", [4, 5, 6])
def test_meridian_is_central_in_triple_point_class2(d):
    assert central_in_class2(builtin_presentation("TriplePoint", d), "ell")


# ---------------------------------------------------------------------------
# the machine-derived kernel chain


@pytest.mark.parametrize("d", [2, 3])
def test_machine_kernel_reduces_to_four_named_generators(d):
    p = k1hat_via_rewriting(d)
    assert p.generators == ("x", "ell", "xt", "yt")
    assert abelianize(p) == abelianize(builtin_presentation("K1hat", d))


def test_machine_kernel_certifies_most_builtin_relators():
    """The one relator that is *not* certified is the subject of a known
    discrepancy between the published presentation and the raw rewriting
    output; see the acceptance suite for the full story."""
    d = 2
    machine = k1hat_via_rewriting(d)
    builtin = builtin_presentation("K1hat", d)
    power_relator = builtin.word("(xt*ell*x)^2*yt")
    outcomes = {}
    for relator in builtin.relators:
        # same generator names on both sides, so transport via the text form
        target = machine.word(format_word(relator, builtin.generators))
        outcomes[relator] = consequence_search(machine, target, depth=6)
    assert outcomes[power_relator] == UNKNOWN
    others = [r for r in builtin.relators if r != power_relator]
    assert all(outcomes[r] == CONSEQUENCE for r in others)
