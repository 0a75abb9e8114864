from ccgparse import logical_form as lf
from ccgparse.category import Modality, Singleton, parse_category
from ccgparse.lexicon import (
    ARITY_MISMATCH,
    LEXICAL_WRAP,
    MARKER_LEXC_PLUS,
    UNDECLARED_ATOM,
    UNDERIVABLE_SINGLETON,
    lexicon_notes,
    lookup,
    parse_lexicon,
    render_lexicon,
    tokenize,
    validate_lexicon,
)

MINI = r"""
# a small but derivable grammar
the := NP[head=?h]/N[head=?h] : \x. def x ;
bucket := N[head=bucket] : bucket [lexc+] ;
kicked := (S\NP)/*"the bucket" : \x\y. die_{x} y ;
John := NP[agr=3s] : j ;
"""


def load(text):
    lex, issues = parse_lexicon(text)
    assert not [i for i in issues if i.severity == "error"], issues
    return lex


# ---------------------------------------------------------------------------
# parsing entries

def test_parse_particle_entry():
    lex = load(r'picked := (S\NP)/*"up"/NP[weight=-] : \y\x\z. cause (init (hold_{x} y z)) z ;')
    (entry,) = lex.all_entries()
    assert entry.phon == ("picked",)
    assert entry.category == parse_category(r'(S\NP)/*"up"/NP[weight=-]')
    assert lf.alpha_eq(entry.lf, lf.parse_term(r"\y\x\z. cause (init (hold_{x} y z)) z"))


def test_parse_schema_entry_with_category_variable():
    lex = load(r"and := (X\*X)/*X : \p\q\z. and (p z) (q z) ;")
    (entry,) = lex.all_entries()
    assert entry.category == parse_category(r"(X\*X)/*X")


def test_singleton_as_result_entry_is_a_violation():
    lex = load(r'kicked := "the bucket"/(S\NP) : \x\y. die_{x} y ;')
    codes = [v.code for v in validate_lexicon(lex)]
    assert "SINGLETON_AS_RESULT" in codes


def test_multi_token_phon():
    lex = load(r"every which way := (S\NP)\(S\NP) : \p\x. omni p x ;")
    (entry,) = lex.all_entries()
    assert entry.phon == ("every", "which", "way")


def test_markers_parsed():
    lex = load("book := N[head=book] : book [lexc+] ;")
    assert lex.all_entries()[0].markers == {MARKER_LEXC_PLUS}


def test_unknown_marker_is_error():
    _, issues = parse_lexicon("book := N : book [shiny] ;")
    assert any("unknown entry marker" in i.message for i in issues)


def test_syntax_errors_carry_line_numbers_and_do_not_stop_parsing():
    text = "John := NP : j ;\nbroken := (S\\ : nope ;\nMary := NP : m ;"
    lex, issues = parse_lexicon(text)
    assert [i.line for i in issues if i.severity == "error"] == [2]
    assert len(lex.all_entries()) == 2


def test_duplicate_entry_is_warning():
    _, issues = parse_lexicon("John := NP : j ;\nJohn := NP : j ;")
    assert [i.severity for i in issues] == ["warning"]


def test_comment_hash_inside_singleton_quotes():
    lex = load('tag := (S\\NP)/*"the # sign" : \\x\\y. tag_{x} y ;  # trailing comment\nthe := NP/N : \\x. def x ;\nsign := N : sign ;\n# whole-line comment\n')
    entry = lex.all_entries()[0]
    arg = entry.category.argument
    assert isinstance(arg, Singleton) and arg.tokens == ("the", "#", "sign")


def test_crlf_input():
    text = "John := NP : j ;\r\nMary := NP : m ;\r\n"
    lex, issues = parse_lexicon(text)
    assert not issues
    assert len(lex.all_entries()) == 2


def test_directives():
    lex = load("set weight_threshold 6 ;\nset default_modality star ;\natoms Deg, Foo ;\nx := S/NP : \\a. f a ;")
    assert lex.config.weight_threshold == 6
    assert lex.config.default_modality is Modality.STAR
    assert {"Deg", "Foo"} <= set(lex.atom_declarations)
    entry = lex.all_entries()[0]
    assert entry.category.slash.modality is Modality.STAR


# ---------------------------------------------------------------------------
# validation

def test_validate_mini_fragment_clean():
    assert validate_lexicon(load(MINI)) == []


def test_validate_empty_lexicon():
    assert validate_lexicon(load("")) == []


def test_underivable_singleton():
    text = r"""
the := NP[head=?h]/N[head=?h] : \x. def x ;
kicked := (S\NP)/*"the bucket" : \x\y. die_{x} y ;
"""
    codes = [v.code for v in validate_lexicon(load(text))]
    assert codes == [UNDERIVABLE_SINGLETON]


def test_arity_mismatch():
    lex = load(r"bad := (S\NP)/NP : \x. foo x ;")
    codes = [v.code for v in validate_lexicon(lex)]
    assert ARITY_MISMATCH in codes


def test_extra_lambdas_are_fine():
    lex = load(r"to := VP[form=toinf]/VP[form=inf] : \p. p ;\n".replace(r"\n", "\n"))
    assert validate_lexicon(lex) == []


def test_undeclared_atom():
    lex = load(r"foo := Q/NP : \x. f x ;")
    codes = [v.code for v in validate_lexicon(lex)]
    assert UNDECLARED_ATOM in codes
    lex = load("atoms Q ;\nfoo := Q/NP : \\x. f x ;")
    assert validate_lexicon(lex) == []


def test_lexical_wrap_note():
    lex = load(r"gwelodd := (S/NP)/NP[agr=3s] : \x\y. saw y x ;")
    assert validate_lexicon(lex) == []
    notes = lexicon_notes(lex)
    assert [n.code for n in notes] == [LEXICAL_WRAP]
    assert lexicon_notes(load("hits := (S\\NP)/NP : \\x\\y. hit x y ;")) == []


def test_validation_is_monotone_under_extension():
    base = load(MINI)
    extended = load(MINI + '\nshoot := VP[form=inf]/*"the breeze" : \\x\\y. smalltalk_{x} one y ;')
    before = {(v.code, v.detail) for v in validate_lexicon(base)}
    after = {(v.code, v.detail) for v in validate_lexicon(extended)}
    assert before <= after


# ---------------------------------------------------------------------------
# tokenize and lookup

def test_tokenize():
    assert tokenize("I picked the book up") == ["I", "picked", "the", "book", "up"]
    assert tokenize("every which way") == ["every", "which", "way"]
    assert tokenize("") == []
    assert tokenize("You DID", case_fold=True) == ["you", "did"]


def test_lookup_multi_token_entry():
    lex = load(
        r"every which way := (S\NP)\(S\NP) : \p\x. omni p x ;"
        + "\nscored := S\\NP : \\y. score y ;"
    )
    hits = lookup(lex, ["scored", "every", "which", "way"], 1)
    assert [(e.phon, n) for e, n in hits] == [(("every", "which", "way"), 3)]


def test_lookup_returns_all_matches(fragment):
    hits = lookup(fragment, ["up"], 0)
    assert len(hits) == 1
    assert hits[0][0].category == parse_category(r"((S\NP)\(S\NP))/NP[special=-]")
    assert lookup(fragment, ["xyzzy"], 0) == []


def test_lookup_case_fold(fragment):
    assert lookup(fragment, ["john"], 0) == []
    assert len(lookup(fragment, ["john"], 0, case_fold=True)) == 2


# ---------------------------------------------------------------------------
# round trip

def test_render_parse_round_trip_mini():
    lex = load(MINI)
    again = load(render_lexicon(lex))
    assert again.all_entries() == lex.all_entries()
    assert again.config == lex.config


def test_render_parse_round_trip_fragment(fragment):
    again, issues = parse_lexicon(render_lexicon(fragment))
    assert not [i for i in issues if i.severity == "error"]
    assert again.all_entries() == fragment.all_entries()
    assert again.config == fragment.config
    assert again.atom_declarations == fragment.atom_declarations
