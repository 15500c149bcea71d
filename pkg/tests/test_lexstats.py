import random

import pytest

from wikiforensics.errors import DataError
from wikiforensics.lexstats import (LexicalDiversityReport, cttr,
                                    lexical_diversity, length_distribution,
                                    mtld, rttr, summarize_corpus, ttr)
from wikiforensics.textprep import TokenizedArticle

from conftest import make_meta, random_tokens


def reference_mtld(tokens, threshold=0.72):
    """Step-by-step reference for the bidirectional factor procedure.

    Written independently of the library path: explicit lists, no id
    mapping, no numpy.
    """

    def one_direction(seq):
        factors = 0.0
        window = []
        for tok in seq:
            window.append(tok)
            ratio = len(set(window)) / len(window)
            if ratio < threshold:
                factors += 1.0
                window = []
        if window:
            ratio = len(set(window)) / len(window)
            factors += (1.0 - ratio) / (1.0 - threshold)
        if factors == 0.0:
            return None
        return len(seq) / factors

    forward = one_direction(list(tokens))
    backward = one_direction(list(reversed(tokens)))
    if forward is None or backward is None:
        return None
    return (forward + backward) / 2.0


def tok(page_id, n_tokens, chars=None):
    return TokenizedArticle(page_id=page_id, tokens=[f"w{i}" for i in range(n_tokens)],
                            char_count=chars if chars is not None else n_tokens * 4)


class TestSummary:
    def test_single_article(self):
        summary = summarize_corpus([(tok(1, 50, chars=40), make_meta(bytes_=100))])
        for fs in (summary.bytes, summary.characters, summary.tokens):
            assert fs.minimum == fs.maximum
            assert fs.mean == fs.total
        assert summary.bytes.total == 100
        assert summary.characters.total == 40
        assert summary.tokens.total == 50

    def test_two_article_mean(self):
        items = [(tok(1, 50), make_meta()), (tok(2, 150), make_meta())]
        summary = summarize_corpus(items)
        assert summary.tokens.mean == 100.0

    def test_against_bruteforce_accumulation(self):
        rng = random.Random(29)
        items = []
        for i in range(1000):
            n = rng.randrange(50, 500)
            c = rng.randrange(100, 9000)
            b = rng.randrange(200, 20000)
            items.append((tok(i + 1, n, chars=c), make_meta(bytes_=b)))
        summary = summarize_corpus(items)
        tokens = [len(t.tokens) for t, _ in items]
        chars = [t.char_count for t, _ in items]
        bytes_ = [m.total_bytes for _, m in items]
        for fs, series in ((summary.tokens, tokens), (summary.characters, chars),
                           (summary.bytes, bytes_)):
            assert fs.total == sum(series)
            assert fs.minimum == min(series)
            assert fs.maximum == max(series)
            assert fs.mean == pytest.approx(sum(series) / len(series), rel=1e-12)

    def test_permutation_invariant_totals(self):
        rng = random.Random(31)
        items = [(tok(i + 1, rng.randrange(50, 200)), make_meta(bytes_=i * 7 + 1))
                 for i in range(50)]
        shuffled = items[:]
        rng.shuffle(shuffled)
        a = summarize_corpus(items)
        b = summarize_corpus(shuffled)
        assert a.tokens.total == b.tokens.total
        assert a.bytes.total == b.bytes.total
        assert a.characters.mean == b.characters.mean

    def test_empty_corpus_errors(self):
        with pytest.raises(DataError):
            summarize_corpus([])


class TestLengthDistribution:
    def test_mean_line(self):
        dist = length_distribution([tok(1, 50), tok(2, 100), tok(3, 150)])
        assert dist.mean_tokens == 100.0

    def test_single_article(self):
        dist = length_distribution([tok(9, 72)])
        assert dist.mean_tokens == 72.0
        assert dist.rows == [(9, 72, 72 * 4)]

    def test_below_mean_count_matches_bruteforce(self):
        rng = random.Random(37)
        articles = [tok(i + 1, rng.randrange(50, 400)) for i in range(200)]
        dist = length_distribution(articles)
        below = sum(1 for _, n, _ in dist.rows if n < dist.mean_tokens)
        expected = sum(1 for a in articles if len(a.tokens) < dist.mean_tokens)
        assert below == expected


class TestTypeTokenRatios:
    def test_moroccan_row(self):
        n, v = 1_154_058, 94_827
        assert ttr(n, v) == pytest.approx(0.082, abs=0.01)
        assert rttr(n, v) == pytest.approx(88.27, abs=0.01)
        assert cttr(n, v) == pytest.approx(62.41, abs=0.01)

    def test_arabic_row(self):
        n, v = 264_777_392, 2_867_782
        assert rttr(n, v) == pytest.approx(176.24, abs=0.01)
        assert cttr(n, v) == pytest.approx(124.62, abs=0.01)

    def test_tiny_case(self):
        assert ttr(4, 2) == pytest.approx(0.5)
        assert rttr(4, 2) == pytest.approx(1.0)
        assert cttr(4, 2) == pytest.approx(0.7071, abs=1e-4)

    def test_zero_tokens_errors(self):
        with pytest.raises(DataError):
            ttr(0, 0)

    def test_cttr_is_rttr_over_sqrt2(self):
        rng = random.Random(41)
        for _ in range(100):
            n = rng.randrange(1, 10**7)
            v = rng.randrange(1, n + 1)
            assert cttr(n, v) == pytest.approx(rttr(n, v) / 2 ** 0.5, rel=1e-12)


class TestMtld:
    def test_periodic_single_token(self):
        assert mtld(["a"] * 6) == pytest.approx(2.0)

    def test_all_distinct_is_undefined(self):
        assert mtld([str(i) for i in range(10)]) is None

    def test_empty_errors(self):
        with pytest.raises(DataError):
            mtld([])

    def test_matches_reference_on_random_sequences(self):
        rng = random.Random(43)
        for _ in range(50):
            tokens = random_tokens(rng, rng.randrange(10, 201), alphabet=5)
            expected = reference_mtld(tokens)
            actual = mtld(tokens)
            if expected is None:
                assert actual is None
            else:
                assert actual == pytest.approx(expected, rel=1e-12)

    def test_relabeling_invariance(self):
        rng = random.Random(47)
        for _ in range(20):
            tokens = random_tokens(rng, 120, alphabet=6)
            mapping = {f"t{i}": f"ζ{i}συμ" for i in range(6)}
            renamed = [mapping[t] for t in tokens]
            assert mtld(tokens) == mtld(renamed)

    def test_periodic_concatenation_stays_two(self):
        for k in (1, 3, 10):
            assert mtld(["a"] * (6 * k)) == pytest.approx(2.0)

    def test_report_fields(self):
        rng = random.Random(51)
        tokens = random_tokens(rng, 300, alphabet=7)
        report = lexical_diversity(tokens)
        assert isinstance(report, LexicalDiversityReport)
        assert report.total_tokens == 300
        assert report.unique_tokens == len(set(tokens))
        assert report.ttr == pytest.approx(report.unique_tokens / 300)
        assert not report.mtld_undefined
        assert report.mtld == pytest.approx(reference_mtld(tokens), rel=1e-12)
