"""Tag-correction branch table and the ranked re-parse loop."""

import pytest

from factlog.correction import (
    apply_corrections,
    correct_tags,
    reparse_loop,
)
from factlog.errors import NonFactualError, ProviderError
from domain_commerce import PARSES, PROTESTS_BAD, PROTESTS_GOOD, commerce_provider
from parsebuild import alts, sent


def one_token(upos, xpos, uc=1.0, xc=1.0, ua="", xa=""):
    extras = f"uc={uc} xc={xc}"
    if ua:
        extras += f" ua={ua}"
    if xa:
        extras += f" xa={xa}"
    return sent(50, "w", f"w {upos} {xpos} 0 root {extras}")


# The independent oracle: a literal transcription of the correction table,
# driven by plain dictionaries rather than the production control flow.
UPOS_TABLE = {
    ("NOUN", "VERB"): ("VERB", ["VBP", "VBZ", "VBD"]),
    ("VERB", "AUX"): ("AUX", ["VBP", "VBZ", "VBD"]),
    ("PRON", "DET"): ("DET", ["WDT", "PDT", "DT"]),
    ("SCONJ", "ADV"): ("ADV", ["WRB", "IN"]),
}
XPOS_TABLE = {("VBD", "VBN"): "VBN", ("VBN", "VBD"): "VBD", ("VBP", "VB"): "VB"}


def oracle(upos, xpos, uc, xc, ua, xa):
    """Expected (new_upos, new_xpos) or None, straight from the tables."""
    second_u = ua[0][0] if ua else None
    second_x = xa[0][0] if xa else None
    if uc < 0.9:
        hit = UPOS_TABLE.get((upos, second_u))
        if hit is None:
            return None
        new_upos, allowed = hit
        pool = [(t, c) for t, c in xa if t in allowed]
        if xpos in allowed:
            pool.append((xpos, xc))
        if pool:
            new_xpos = max(pool, key=lambda tc: tc[1])[0]
        else:
            new_xpos = allowed[0]
        return new_upos, new_xpos
    if xc < 0.9:
        new_xpos = XPOS_TABLE.get((xpos, second_x))
        if new_xpos is None:
            return None
        return upos, new_xpos
    return None


BRANCH_CASES = [
    # all four upos branches firing
    ("NOUN", "NNS", 0.73, 1.0, [("VERB", 0.26)], [("VBZ", 0.3)]),
    ("VERB", "VBZ", 0.6, 1.0, [("AUX", 0.35)], [("VBP", 0.2), ("VBD", 0.1)]),
    ("PRON", "PRP", 0.5, 1.0, [("DET", 0.4)], [("WDT", 0.2)]),
    ("SCONJ", "IN", 0.7, 1.0, [("ADV", 0.25)], [("WRB", 0.2)]),
    # upos branches not firing: confident, wrong alternate, no alternates
    ("NOUN", "NNS", 0.95, 1.0, [("VERB", 0.04)], []),
    ("NOUN", "NNS", 0.85, 1.0, [("ADJ", 0.1)], []),
    ("VERB", "VBZ", 0.85, 1.0, [], []),
    ("ADJ", "JJ", 0.5, 1.0, [("NOUN", 0.4)], []),
    # xpos branches firing
    ("VERB", "VBD", 1.0, 0.55, [], [("VBN", 0.44)]),
    ("VERB", "VBN", 1.0, 0.6, [], [("VBD", 0.39)]),
    ("VERB", "VBP", 1.0, 0.7, [], [("VB", 0.29)]),
    # xpos branches not firing
    ("VERB", "VBD", 1.0, 0.95, [], [("VBN", 0.04)]),
    ("VERB", "VBD", 1.0, 0.6, [], [("VBG", 0.3)]),
    ("VERB", "VBZ", 1.0, 0.5, [], [("VB", 0.4)]),
    # upos branch takes priority over xpos branch
    ("NOUN", "VBD", 0.8, 0.5, [("VERB", 0.19)], [("VBN", 0.4)]),
    # missing xpos alternates fall back to the first allowed tag
    ("PRON", "PRP", 0.5, 1.0, [("DET", 0.4)], []),
]


@pytest.mark.parametrize("upos,xpos,uc,xc,ua,xa", BRANCH_CASES)
def test_branch_table_matches_oracle(upos, xpos, uc, xc, ua, xa):
    ua_s = ",".join(f"{t}:{c}" for t, c in ua)
    xa_s = ",".join(f"{t}:{c}" for t, c in xa)
    p = one_token(upos, xpos, uc, xc, ua_s, xa_s)
    got = correct_tags(p)
    expected = oracle(upos, xpos, uc, xc, ua, xa)
    if expected is None:
        assert got == []
    else:
        assert len(got) == 1
        c = got[0]
        assert (c.new_upos, c.new_xpos) == expected
        assert (c.old_upos, c.old_xpos) == (upos, xpos)


def test_protests_yields_noun_to_verb_correction():
    corrections = correct_tags(PROTESTS_BAD)
    assert len(corrections) == 1
    c = corrections[0]
    assert c.token == 3
    assert (c.old_upos, c.new_upos) == ("NOUN", "VERB")
    assert c.new_xpos == "VBZ"


def test_correct_tags_idempotent_on_own_output():
    corrections = correct_tags(PROTESTS_BAD)
    fixed = apply_corrections(PROTESTS_BAD, corrections)
    again = correct_tags(fixed)
    corrected_tokens = {c.token for c in corrections}
    assert not [c for c in again if c.token in corrected_tokens]


def test_at_most_one_correction_per_token():
    corrections = correct_tags(PROTESTS_BAD)
    assert len({c.token for c in corrections}) == len(corrections)


# -- re-parse loop -----------------------------------------------------------


def test_factual_parse_short_circuits_without_provider_call():
    class ExplodingProvider:
        def parse(self, *a, **kw):
            raise AssertionError("provider must not be called")

    p = PARSES["Mary buys a car"]
    result = reparse_loop("Mary buys a car", p, ExplodingProvider())
    assert result.token(1).validation == "accepted"


def test_protests_recovers_via_corrected_reparse():
    provider = commerce_provider()
    result = reparse_loop(
        "A student protests against the government", PROTESTS_BAD, provider
    )
    assert result.token(3).upos == "VERB"
    assert result.root.token_id == 3
    assert result.token(2).deprel == "nsubj"


def test_unfixable_sentence_is_non_factual():
    p = sent(51, "Go fetch more water", """
Go|go VERB VB 0 root
fetch VERB VB 1 xcomp
more ADJ JJR 4 amod
water NOUN NN 2 obj
""")
    provider = commerce_provider()
    with pytest.raises(NonFactualError) as err:
        reparse_loop("Go fetch more water", p, provider)
    assert err.value.verdict is not None
    assert not err.value.verdict.accepted


def test_all_confident_tags_degenerate_to_validate_or_reject():
    # no tag has low confidence, so no corrections fire and the provider
    # is never consulted
    calls = []

    class CountingProvider:
        def parse(self, *a, **kw):
            calls.append(a)
            raise ProviderError("unreachable")

    p = sent(52, "buys a car", """
buys|buy VERB VBZ 0 root
a DET DT 3 det
car NOUN NN 1 obj
""")
    with pytest.raises(NonFactualError):
        reparse_loop("buys a car", p, CountingProvider())
    assert calls == []


def test_reparse_returns_first_accepted_rank():
    provider = commerce_provider()
    out = reparse_loop(
        "A student protests against the government", PROTESTS_BAD, provider
    )
    from factlog.validation import validate

    assert validate(out).accepted


def test_provider_echo_enforced():
    bad_echo = alts(PROTESTS_GOOD.retag(3, upos="NOUN"),
                    text="A student protests against the government")

    class LyingProvider:
        def parse(self, text, tag_constraints=None, k=5):
            return bad_echo

    with pytest.raises(ProviderError):
        reparse_loop(
            "A student protests against the government",
            PROTESTS_BAD,
            LyingProvider(),
        )
