import pytest
from hypothesis import given, strategies as st

from humorbeam.emotions import EmotionConfig, sample_emotions, simonov

finite = st.floats(-1e3, 1e3, allow_nan=False)


class TestSimonov:
    def test_zero_at_baseline(self):
        assert simonov(1.0, 0.5, 0.5) == 0.0

    def test_arithmetic(self):
        assert simonov(2.0, 0.9, 0.5) == pytest.approx(0.8)
        assert simonov(1.0, 0.2, 0.5) == pytest.approx(-0.3)

    def test_negative_need_rejected(self):
        with pytest.raises(ValueError):
            simonov(-1.0, 0.0, 0.0)

    @given(st.floats(0.001, 100), finite, finite)
    def test_sign_follows_surplus(self, n, i, i0):
        e = simonov(n, i, i0)
        if i > i0:
            assert e > 0
        elif i < i0:
            assert e < 0


class TestSample:
    def test_pleasure_zero_at_baseline(self):
        cfg = EmotionConfig()
        assert sample_emotions(cfg.I0_pleasure, None, cfg).pleasure == 0.0

    def test_no_competitor(self):
        assert sample_emotions(-1.0, None).confidence is None
        assert sample_emotions(-1.0, float("-inf")).confidence is None

    def test_confidence_unit(self):
        cfg = EmotionConfig(need_N=1.0, I0_confidence=0.5)
        s = sample_emotions(-1.0, -2.5, cfg)
        assert s.confidence == pytest.approx(1.0)
        assert (s.p_max, s.p_comp) == (-1.0, -2.5)

    def test_config_rejects_negative_need(self):
        with pytest.raises(ValueError):
            EmotionConfig(need_N=-0.1)
