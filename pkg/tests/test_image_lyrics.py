import base64

import pytest

from melodist.errors import AuthFailure, EmptyGeneration, ProviderUnavailable
from melodist.image_lyrics import (
    API_KEY_VAR,
    ENDPOINT_VAR,
    HttpProvider,
    LyricsRequest,
    StubProvider,
    build_prompt,
    parse_lyrics_response,
    provider_from_env,
    request_lyrics,
)
from melodist.lyrics import segment_phrases

# Smallest valid PNG header is enough for request validation.
TINY_PNG = base64.b64decode(
    b"iVBORw0KGgoAAAANSUhEUgAAAAEAAAABCAYAAAAfFcSJAAAADUlEQVR42mNk"
    b"+M9QDwADhgGAWjR9awAAAABJRU5ErkJggg=="
)


def _request(**kwargs):
    defaults = dict(image=TINY_PNG, media_type="image/png")
    defaults.update(kwargs)
    return LyricsRequest(**defaults)


class TestBuildPrompt:
    def test_medium_preference_asks_for_eight_phrases(self):
        assert "8" in build_prompt(_request(length_preference="medium"))

    def test_short_and_long_counts(self):
        assert "4" in build_prompt(_request(length_preference="short"))
        assert "12" in build_prompt(_request(length_preference="long"))

    def test_style_hint_verbatim(self):
        prompt = build_prompt(_request(style_hint="lullaby"))
        assert "lullaby" in prompt

    def test_deterministic(self):
        assert build_prompt(_request()) == build_prompt(_request())

    def test_bad_request_rejected(self):
        with pytest.raises(ValueError):
            LyricsRequest(b"", "image/png")
        with pytest.raises(ValueError):
            LyricsRequest(TINY_PNG, "image/gif")


class TestParseResponse:
    def test_numbering_stripped(self):
        assert parse_lyrics_response("1. Birds fly\n2. Over the sea") == "Birds fly\nOver the sea"

    def test_fences_stripped(self):
        assert parse_lyrics_response("```\nHello world\nGoodbye moon\n```") == "Hello world\nGoodbye moon"

    def test_whitespace_only_rejected(self):
        with pytest.raises(EmptyGeneration):
            parse_lyrics_response("   \n  ")

    def test_prose_paragraph_split_by_sentences(self):
        text = parse_lyrics_response("Birds fly over the sea. The sun is warm today.")
        assert len(segment_phrases(text)) == 2

    def test_single_phrase_rejected(self):
        with pytest.raises(EmptyGeneration):
            parse_lyrics_response("hello world")

    def test_bullets_stripped(self):
        assert parse_lyrics_response("- First line\n- Second line") == "First line\nSecond line"


class TestStub:
    def test_stub_is_deterministic_and_parseable(self):
        response = request_lyrics(_request(), StubProvider())
        again = request_lyrics(_request(), StubProvider())
        assert response.lyrics == again.lyrics
        assert len(segment_phrases(response.lyrics)) >= 2

    def test_provider_from_env_stub(self, monkeypatch):
        monkeypatch.setenv("LYRICS_STUB_MODE", "1")
        assert isinstance(provider_from_env(), StubProvider)


class TestHttpProvider:
    def test_missing_credential_fails_before_network(self, monkeypatch):
        monkeypatch.setenv(ENDPOINT_VAR, "https://example.invalid/lyrics")
        monkeypatch.delenv(API_KEY_VAR, raising=False)
        with pytest.raises(AuthFailure):
            HttpProvider()

    def test_missing_endpoint_is_unavailable(self, monkeypatch):
        monkeypatch.delenv(ENDPOINT_VAR, raising=False)
        monkeypatch.delenv(API_KEY_VAR, raising=False)
        with pytest.raises(ProviderUnavailable):
            HttpProvider()


class TestRetries:
    class Flaky:
        def __init__(self, failures):
            self.failures = failures
            self.calls = 0

        def send(self, image, media_type, prompt):
            self.calls += 1
            if self.calls <= self.failures:
                raise ProviderUnavailable("transient")
            return "First line of song\nSecond line of song"

    def test_recovers_after_transient_failures(self, monkeypatch):
        monkeypatch.setattr("melodist.image_lyrics.time.sleep", lambda s: None)
        provider = self.Flaky(failures=2)
        response = request_lyrics(_request(), provider)
        assert provider.calls == 3
        assert "First line" in response.lyrics

    def test_gives_up_after_two_retries(self, monkeypatch):
        monkeypatch.setattr("melodist.image_lyrics.time.sleep", lambda s: None)
        provider = self.Flaky(failures=10)
        with pytest.raises(ProviderUnavailable):
            request_lyrics(_request(), provider)
        assert provider.calls == 3
