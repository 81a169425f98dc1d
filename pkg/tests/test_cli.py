import json
from pathlib import Path

import pytest

from melodist.cli import main
from melodist.theory import KEY_CATALOG

LYRICS = "Golden sunshine fills the meadow,\nlittle sparrows start to sing.\n"


@pytest.fixture
def lyric_file(tmp_path):
    path = tmp_path / "song.txt"
    path.write_text(LYRICS, "utf-8")
    return str(path)


class TestGenerate:
    def test_writes_three_files(self, lyric_file, tmp_path, capsys):
        out = tmp_path / "out"
        code = main(["generate", "--lyrics", lyric_file, "--key", "D major",
                     "--seed", "7", "--out", str(out)])
        assert code == 0
        files = sorted(p.name for p in out.iterdir())
        assert [Path(f).suffix for f in files] == [".mid", ".musicxml", ".txt"]
        assert "key_confidence=" in capsys.readouterr().out

    def test_deterministic_artifacts(self, lyric_file, tmp_path):
        out1, out2 = tmp_path / "a", tmp_path / "b"
        for out in (out1, out2):
            assert main(["generate", "--lyrics", lyric_file, "--key", "D major",
                         "--seed", "7", "--out", str(out)]) == 0
        xml1 = next(out1.glob("*.musicxml")).read_bytes()
        xml2 = next(out2.glob("*.musicxml")).read_bytes()
        assert xml1 == xml2

    def test_missing_file_exit_2(self, tmp_path):
        assert main(["generate", "--lyrics", str(tmp_path / "absent.txt")]) == 2

    def test_empty_lyrics_exit_3(self, tmp_path):
        empty = tmp_path / "empty.txt"
        empty.write_text("123 !!!", "utf-8")
        assert main(["generate", "--lyrics", str(empty)]) == 3

    def test_filename_convention(self, lyric_file, tmp_path):
        out = tmp_path / "out"
        main(["generate", "--lyrics", lyric_file, "--key", "F# minor",
              "--seed", "11", "--out", str(out)])
        names = [p.name for p in out.iterdir()]
        assert any(n == "golden-sunshine-fills-f-sharp-minor-11.musicxml" for n in names)

    def test_image_stub(self, tmp_path):
        import base64

        png = base64.b64decode(
            b"iVBORw0KGgoAAAANSUhEUgAAAAEAAAABCAYAAAAfFcSJAAAADUlEQVR42mNk"
            b"+M9QDwADhgGAWjR9awAAAABJRU5ErkJggg=="
        )
        image = tmp_path / "pic.png"
        image.write_bytes(png)
        out = tmp_path / "out"
        code = main(["generate", "--image", str(image), "--stub", "--seed", "5",
                     "--out", str(out), "--key", "C major"])
        assert code == 0
        assert list(out.glob("*.musicxml"))


class TestEvaluate:
    def test_self_reference(self, lyric_file, tmp_path, capsys):
        out = tmp_path / "out"
        main(["generate", "--lyrics", lyric_file, "--key", "C major",
              "--seed", "1", "--out", str(out)])
        xml = str(next(out.glob("*.musicxml")))
        capsys.readouterr()
        code = main(["evaluate", xml, "--reference", xml])
        assert code == 0
        output = capsys.readouterr().out
        assert "rhythm_match=1.0" in output
        assert "key_confidence=" in output

    def test_corrupt_xml_exit_3(self, tmp_path):
        bad = tmp_path / "bad.musicxml"
        bad.write_text("<broken", "utf-8")
        assert main(["evaluate", str(bad)]) == 3

    def test_missing_file_exit_2(self, tmp_path):
        assert main(["evaluate", str(tmp_path / "absent.musicxml")]) == 2


class TestCompare:
    def test_counts_and_key_guarantee(self, lyric_file, tmp_path, capsys):
        originals = tmp_path / "originals"
        originals.mkdir()
        for i, key in enumerate(("D major", "A minor")):
            out = tmp_path / f"gen{i}"
            main(["generate", "--lyrics", lyric_file, "--key", key,
                  "--seed", str(40 + i), "--out", str(out)])
            xml = next(out.glob("*.musicxml"))
            (originals / f"original{i}.musicxml").write_bytes(xml.read_bytes())
        report_dir = tmp_path / "report"
        capsys.readouterr()
        code = main(["compare", "--originals", str(originals),
                     "--regenerate", "3", "--seed", "9", "--out", str(report_dir)])
        assert code == 0
        table = capsys.readouterr().out
        assert table.startswith("metric\tgroup\tquantile\tvalue")
        payload = json.loads((report_dir / "report.json").read_text("utf-8"))
        assert len(payload["scores"]) == 6  # 2 originals x 3 variants
        keys = [s["key"] for s in payload["scores"]]
        assert "D major" in keys[:3]
        assert "A minor" in keys[3:]

    def test_deterministic(self, lyric_file, tmp_path, capsys):
        originals = tmp_path / "originals"
        originals.mkdir()
        out = tmp_path / "gen"
        main(["generate", "--lyrics", lyric_file, "--key", "G major",
              "--seed", "2", "--out", str(out)])
        (originals / "o.musicxml").write_bytes(next(out.glob("*.musicxml")).read_bytes())
        capsys.readouterr()
        main(["compare", "--originals", str(originals), "--regenerate", "2", "--seed", "4"])
        first = capsys.readouterr().out
        main(["compare", "--originals", str(originals), "--regenerate", "2", "--seed", "4"])
        second = capsys.readouterr().out
        assert first == second

    def test_unreadable_corpus_exit_3(self, tmp_path):
        empty = tmp_path / "none"
        empty.mkdir()
        assert main(["compare", "--originals", str(empty)]) == 3


class TestListKeys:
    def test_prints_all_seventeen(self, capsys):
        assert main(["list-keys"]) == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert len(lines) == len(KEY_CATALOG) == 17
        assert "C major" in lines and "F# minor" in lines
