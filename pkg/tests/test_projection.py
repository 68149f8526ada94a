from collections import Counter

import pytest

from alignkit import (
    ProjectionConfig,
    TagProjector,
    build_type_dictionary,
    parse_conll,
    project,
    token_project,
)
from alignkit.analysis import SplitMix64
from alignkit.corpus import AlignmentSet, TaggedCorpus, TaggedSentence

from oracles import naive_majority_projection


def tagged(rows, task="pos", tagset=None):
    sentences = tuple(
        TaggedSentence(tuple(t for t, _ in row), tuple(g for _, g in row)) for row in rows
    )
    inferred = frozenset(g for row in rows for _, g in row)
    return TaggedCorpus(sentences, frozenset(tagset) if tagset else inferred, task)


class TestTokenProject:
    def test_identity_alignment_copies_tags(self):
        src = tagged([[("el", "DET"), ("perro", "NOUN")]])
        alignment = AlignmentSet.from_sure([{(0, 0), (1, 1)}])
        votes = token_project(src, alignment, [["le", "chien"]])
        assert votes[0][0] == Counter({"DET": 1})
        assert votes[0][1] == Counter({"NOUN": 1})

    def test_multiple_votes_and_unaligned(self):
        src = tagged([[("el", "DET"), ("perro", "NOUN")]])
        alignment = AlignmentSet.from_sure([{(0, 0), (1, 0)}])
        votes = token_project(src, alignment, [["le", "chien"]])
        assert votes[0][0] == Counter({"DET": 1, "NOUN": 1})
        assert votes[0][1] == Counter()

    def test_empty_alignment_all_empty(self):
        src = tagged([[("el", "DET")]])
        alignment = AlignmentSet.from_sure([set()])
        votes = token_project(src, alignment, [["le", "chien"]])
        assert all(not v for v in votes[0])

    def test_line_count_mismatch(self):
        src = tagged([[("el", "DET")]])
        alignment = AlignmentSet.from_sure([set(), set()])
        with pytest.raises(ValueError, match="line counts"):
            token_project(src, alignment, [["le"]])

    def test_link_bounds_checked(self):
        src = tagged([[("el", "DET")]])
        alignment = AlignmentSet.from_sure([{(0, 3)}])
        with pytest.raises(ValueError, match="out of range"):
            token_project(src, alignment, [["le"]])


class TestTypeDictionary:
    def make_votes(self, counts_by_word):
        """counts_by_word: word -> list of winning tags, one per occurrence."""
        votes, tokens = [], []
        for word, tags in counts_by_word.items():
            for tag in tags:
                votes.append([Counter({tag: 1})])
                tokens.append([word])
        return votes, tokens

    def test_beta_threshold_drops_minority(self):
        votes, tokens = self.make_votes({"x": ["NOUN"] * 10 + ["VERB"]})
        config = ProjectionConfig(type_threshold=0.3)
        d = build_type_dictionary(votes, tokens, config, frozenset({"NOUN", "VERB"}))
        assert d.allowed["x"] == {"NOUN"}  # 1 < 0.3 * 10

    def test_tie_keeps_both(self):
        votes, tokens = self.make_votes({"x": ["NOUN"] * 5 + ["VERB"] * 5})
        config = ProjectionConfig(type_threshold=1.0)
        d = build_type_dictionary(votes, tokens, config, frozenset({"NOUN", "VERB"}))
        assert d.allowed["x"] == {"NOUN", "VERB"}

    def test_unseen_type_absent(self):
        votes, tokens = self.make_votes({"x": ["NOUN"]})
        config = ProjectionConfig()
        d = build_type_dictionary(votes, tokens, config, frozenset({"NOUN"}))
        assert "y" not in d
        assert len(d) == 1

    def test_beta_zero_admits_whole_tagset(self):
        votes, tokens = self.make_votes({"x": ["NOUN"]})
        config = ProjectionConfig(type_threshold=0.0)
        d = build_type_dictionary(votes, tokens, config, frozenset({"NOUN", "VERB", "DET"}))
        assert d.allowed["x"] == {"NOUN", "VERB", "DET"}


IDENTITY_BITEXT = [["el", "perro", "ladra"], ["la", "casa", "roja"]]


def identity_setup():
    src = tagged([
        [("el", "DET"), ("perro", "NOUN"), ("ladra", "VERB")],
        [("la", "DET"), ("casa", "NOUN"), ("roja", "ADJ")],
    ])
    alignment = AlignmentSet.from_sure([{(0, 0), (1, 1), (2, 2)}, {(0, 0), (1, 1), (2, 2)}])
    return src, alignment


class TestProject:
    def test_identity_round_trip(self):
        src, alignment = identity_setup()
        out, stats = project(src, alignment, IDENTITY_BITEXT, ProjectionConfig(min_coverage=0.0))
        assert [s.tags for s in out] == [s.tags for s in src]
        assert stats.sentences_kept == 2 and stats.sentences_dropped == 0
        assert stats.token_coverage == 1.0

    def test_dictionary_restricts_token_vote(self):
        # 'chien' wins NOUN corpus-wide (3 occurrences), so the dictionary
        # allows only NOUN; the DET/NOUN token tie must resolve to NOUN
        src = tagged([
            [("perro", "NOUN")], [("perro", "NOUN")], [("perro", "NOUN")],
            [("el", "DET"), ("perro", "NOUN")],
        ])
        alignment = AlignmentSet.from_sure([
            {(0, 0)}, {(0, 0)}, {(0, 0)}, {(0, 0), (1, 0)},
        ])
        tgt = [["chien"], ["chien"], ["chien"], ["chien"]]
        out, _ = project(src, alignment, tgt, ProjectionConfig(min_coverage=0.0, type_threshold=0.3))
        assert out[3].tags == ("NOUN",)

    def test_no_votes_fallback(self):
        src = tagged([[("el", "DET"), ("perro", "NOUN")]])
        alignment = AlignmentSet.from_sure([{(0, 0)}])
        out, _ = project(
            src, alignment, [["le", "inconnu"]],
            ProjectionConfig(min_coverage=0.0, fallback_tag="NOUN"),
        )
        assert out[0].tags == ("DET", "NOUN")

    def test_fallback_must_be_in_tagset(self):
        src = tagged([[("el", "DET")]])
        alignment = AlignmentSet.from_sure([{(0, 0)}])
        with pytest.raises(ValueError, match="fallback"):
            project(src, alignment, [["le"]], ProjectionConfig(min_coverage=0.0))

    def test_ner_repair(self):
        src = tagged(
            [[("Juan", "B-PER"), ("Garcia", "I-PER")]],
            task="ner",
            tagset={"B-PER", "I-PER", "O"},
        )
        # only the second source token aligns, projecting an orphan I-PER
        alignment = AlignmentSet.from_sure([{(1, 1)}])
        out, _ = project(
            src, alignment, [["x", "y"]],
            ProjectionConfig(task="ner", min_coverage=0.0),
        )
        assert out[0].tags == ("O", "B-PER")

    def test_coverage_filter_drops_sparse_sentences(self):
        src, alignment = identity_setup()
        sparse = AlignmentSet.from_sure([{(0, 0), (1, 1), (2, 2)}, {(0, 0)}])
        out, stats = project(src, sparse, IDENTITY_BITEXT, ProjectionConfig(min_coverage=0.8))
        assert stats.sentences_kept == 1 and stats.sentences_dropped == 1
        assert stats.kept_ids == [0]
        assert len(out) == 1

    def test_rho_monotonicity(self):
        src, alignment = identity_setup()
        sparse = AlignmentSet.from_sure([{(0, 0), (1, 1)}, {(0, 0)}])
        kept = [
            project(src, sparse, IDENTITY_BITEXT, ProjectionConfig(min_coverage=rho))[1].sentences_kept
            for rho in (0.0, 0.4, 0.7, 1.0)
        ]
        assert kept == sorted(kept, reverse=True)

    def test_zero_thresholds_reduce_to_pure_majority(self):
        rng = SplitMix64(77)
        tags = ["DET", "NOUN", "VERB", "ADJ"]
        rows, links, tgt = [], [], []
        for _ in range(30):
            n = 1 + rng.randbelow(5)
            m = 1 + rng.randbelow(5)
            rows.append([(f"w{rng.randbelow(8)}", tags[rng.randbelow(4)]) for _ in range(n)])
            links.append({
                (rng.randbelow(n), rng.randbelow(m)) for _ in range(rng.randbelow(7))
            })
            tgt.append([f"v{rng.randbelow(8)}" for _ in range(m)])
        src = tagged(rows, tagset=tags)
        config = ProjectionConfig(type_threshold=0.0, min_coverage=0.0, fallback_tag="NOUN")
        out, _ = project(src, AlignmentSet.from_sure(links), tgt, config)
        freq = Counter(g for row in rows for _, g in row)
        rank = {t: k for k, t in enumerate(sorted(tags, key=lambda t: (-freq[t], t)))}
        oracle = naive_majority_projection(
            [[g for _, g in row] for row in rows], links, tgt, rank, "NOUN"
        )
        assert [list(s.tags) for s in out] == oracle

    def test_output_tags_within_tagset(self):
        src, alignment = identity_setup()
        out, _ = project(src, alignment, IDENTITY_BITEXT, ProjectionConfig(min_coverage=0.0))
        for sent in out:
            assert set(sent.tags) <= out.tagset

    def test_deterministic(self):
        src, alignment = identity_setup()
        a = project(src, alignment, IDENTITY_BITEXT, ProjectionConfig(min_coverage=0.0))
        b = project(src, alignment, IDENTITY_BITEXT, ProjectionConfig(min_coverage=0.0))
        assert [s.tags for s in a[0]] == [s.tags for s in b[0]]


class TestNerBioValidity:
    def test_random_vote_inputs_always_bio_valid(self):
        rng = SplitMix64(123)
        ner_tags = ["O", "B-PER", "I-PER", "B-LOC", "I-LOC"]
        rows, links, tgt = [], [], []
        for _ in range(40):
            n = 2 + rng.randbelow(4)
            m = 2 + rng.randbelow(4)
            # source rows must themselves be BIO-valid
            row = []
            prev = "O"
            for _ in range(n):
                choices = [t for t in ner_tags if not t.startswith("I-")
                           or prev in (t, "B-" + t[2:])]
                tag = choices[rng.randbelow(len(choices))]
                row.append((f"w{rng.randbelow(6)}", tag))
                prev = tag
            rows.append(row)
            links.append({(rng.randbelow(n), rng.randbelow(m)) for _ in range(rng.randbelow(6))})
            tgt.append([f"v{rng.randbelow(6)}" for _ in range(m)])
        src = tagged(rows, task="ner", tagset=ner_tags)
        config = ProjectionConfig(task="ner", min_coverage=0.0)
        out, _ = project(src, AlignmentSet.from_sure(links), tgt, config)
        assert out.task == "ner"  # TaggedCorpus construction enforces BIO validity


class TestTagProjector:
    def test_fit_transform_matches_project(self, toy_corpus, toy_tags, toy_gold):
        X = (toy_tags, toy_gold, toy_corpus)
        projector = TagProjector(min_coverage=0.0).fit(X)
        via_estimator = projector.transform(X)
        via_function, _ = project(
            toy_tags, toy_gold, toy_corpus, ProjectionConfig(min_coverage=0.0)
        )
        assert [s.tags for s in via_estimator] == [s.tags for s in via_function]
        assert projector.stats_.sentences_kept == len(toy_corpus)

    def test_get_params(self):
        projector = TagProjector(task="ner", type_threshold=0.5)
        assert projector.get_params()["type_threshold"] == 0.5


class TestConllIntegration:
    def test_projected_output_serializes(self, toy_corpus, toy_tags, toy_gold):
        out, _ = project(toy_tags, toy_gold, toy_corpus, ProjectionConfig(min_coverage=0.0))
        text = "".join(
            "".join(f"{t}\t{g}\n" for t, g in zip(s.tokens, s.tags)) + "\n" for s in out
        )
        back = parse_conll(text)
        assert len(back) == len(out)
