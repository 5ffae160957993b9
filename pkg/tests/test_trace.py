import json
import math

import pytest

from humorbeam import fixtures
from humorbeam.decoder import UNBOUNDED, DecoderConfig, Incomprehension, run
from humorbeam.trace import (
    LaughterParams,
    decoder_records,
    dumps,
    parse_grid,
    parse_tau,
    sweep_tau,
)


def joke_records(tau=1, **kw):
    trace = run(fixtures.text("joke14"), DecoderConfig(tau_max=tau), fixtures.model(), fixtures.lexicon())
    return decoder_records(trace.events, LaughterParams(**kw))


class TestRecords:
    def test_humor_paired_with_laughter(self):
        recs = joke_records()
        for k, rec in enumerate(recs):
            if rec["type"] == "humor":
                nxt = recs[k + 1]
                assert nxt["type"] == "laughter" and nxt["t"] == rec["t"]
        assert sum(r["type"] == "laughter" for r in recs) == sum(r["type"] == "humor" for r in recs)

    def test_nondecreasing_t(self):
        ts = [r["t"] for r in joke_records()]
        assert ts == sorted(ts)

    def test_laughter_fields(self):
        (laugh,) = [r for r in joke_records(coupling_scale=0.0) if r["type"] == "laughter"]
        assert set(laugh) == {"t", "type", "amplitude", "limbic", "sweeps", "nervous"}
        assert laugh["nervous"] is False

    def test_overload_triggers_nervous_laughter(self):
        events = [Incomprehension(t, t, "zzz") for t in range(3)]
        recs = decoder_records(events, LaughterParams(overload=2))
        nervous = [r for r in recs if r["type"] == "laughter"]
        assert len(nervous) == 1 and nervous[0]["nervous"] is True

    def test_dumps_is_json_lines(self):
        text = dumps(joke_records())
        for line in text.splitlines():
            json.loads(line)
        assert text.endswith("\n")


class TestTau:
    @pytest.mark.parametrize("text,want", [("0", 0), ("8", 8), ("inf", UNBOUNDED), ("Unbounded", UNBOUNDED)])
    def test_parse(self, text, want):
        assert parse_tau(text) == want

    @pytest.mark.parametrize("text", ["-1", "x", "1.5"])
    def test_parse_bad(self, text):
        with pytest.raises(ValueError):
            parse_tau(text)

    def test_grid_must_increase(self):
        with pytest.raises(ValueError):
            parse_grid("0,2,1")
        with pytest.raises(ValueError):
            parse_grid("")


class TestSweep:
    def sweep(self, alpha, beta):
        texts = [t for _, t in fixtures.mixed_corpus()]
        return sweep_tau(texts, parse_grid("0,1,2,4,8,inf"), alpha, beta, fixtures.model(), fixtures.lexicon())

    def test_latency_only_prefers_smallest(self):
        assert self.sweep(0.0, 1.0).tau_star == 0

    def test_retractions_only_prefers_largest(self):
        assert self.sweep(1.0, 0.0).tau_star == UNBOUNDED

    def test_loss_recomputes_from_table(self):
        res = self.sweep(1.0, 1.0)
        rows = [line.split("\t") for line in res.table().splitlines()[1:-1]]
        for tau, rate, lat, loss in rows:
            assert float(loss) == 1.0 * float(rate) + 1.0 * float(lat)

    def test_latency_monotone(self):
        lat = self.sweep(1.0, 1.0).mean_latency
        assert lat == sorted(lat)
        assert lat[0] == 0.0

    def test_retractions_vanish_when_unbounded(self):
        assert self.sweep(1.0, 1.0).retraction_rate[-1] == 0.0

    def test_empty_corpus(self):
        with pytest.raises(ValueError):
            sweep_tau([], [0], 1, 1, fixtures.model(), fixtures.lexicon())
