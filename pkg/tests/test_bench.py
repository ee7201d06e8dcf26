import csv
import io
import logging
import shutil

import numpy as np
import pytest

from conftest import DATA_DIR, smooth_image
from dtle import save_pgm
from dtle.bench import CSV_COLUMNS, bench, measure, spe_table, variant, write_rows, write_spe


def _stable(rows):
    return [(r.image, r.scheme, r.ec, r.psnr_original, r.psnr_cover, r.aux_bits, r.l_clm) for r in rows]


@pytest.fixture
def corpus(tmp_path):
    rng = np.random.default_rng(3)
    for k in range(6):
        save_pgm(tmp_path / f"img{k}.pgm", smooth_image(rng, 24 + 4 * k, 28, lo=0, hi=256, noise=k))
    return tmp_path


class TestBench:
    def test_empty_directory(self, tmp_path, caplog):
        with caplog.at_level(logging.WARNING):
            report = bench(tmp_path)
        assert report.rows == [] and report.ok
        assert "no PGM images" in caplog.text
        out = io.StringIO()
        write_rows(report.rows, out)
        assert out.getvalue().strip() == ",".join(CSV_COLUMNS)

    def test_rows_and_schema(self, corpus):
        report = bench(corpus, targets=[100, 400])
        assert len(report.rows) == 6 * 3
        out = io.StringIO()
        write_rows(report.rows, out)
        records = list(csv.DictReader(io.StringIO(out.getvalue())))
        assert tuple(records[0]) == CSV_COLUMNS
        assert {r["scheme"] for r in records} == {"DTLE", "DTLE-NoMED", "TLE"}
        for r in records:
            if r["psnr_original_db"] != "inf":
                assert len(r["psnr_original_db"].split(".")[1]) == 4
        assert len(report.spe) == 3 * 2

    def test_order_invariant(self, corpus, tmp_path_factory):
        other = tmp_path_factory.mktemp("shuffled")
        for k, name in enumerate(reversed(sorted(p.name for p in corpus.iterdir()))):
            shutil.copy(corpus / name, other / name)
        assert _stable(bench(corpus).rows) == _stable(bench(other).rows)

    def test_deterministic(self, corpus):
        assert _stable(bench(corpus, seed=2).rows) == _stable(bench(corpus, seed=2).rows)

    def test_unreadable_file_skipped(self, corpus):
        (corpus / "broken.pgm").write_bytes(b"P5\n4 4\n255\n")
        report = bench(corpus, schemes=["dtle-nomed"])
        assert not report.ok
        assert [name for name, _ in report.skipped] == ["broken.pgm"]
        assert len(report.rows) == 6

    def test_max_ec_embeds(self, corpus):
        for r in bench(corpus).rows:
            assert r.ec >= 0
            assert r.psnr_original > 0

    def test_spe_monotone_on_synthetic_corpus(self, tmp_path):
        rng = np.random.default_rng(11)
        for k in range(100):
            save_pgm(tmp_path / f"s{k:03d}.pgm", smooth_image(rng, 16, 16, lo=0, hi=256, noise=int(rng.integers(0, 12))))
        targets = list(range(0, 600, 50))
        report = bench(tmp_path, schemes=["dtle-nomed"], targets=targets)
        values = [pct for _, _, pct, _ in report.spe]
        assert values == sorted(values, reverse=True)
        assert values[0] == 100.0

    def test_spe_table_csv(self):
        table = spe_table([], [1])
        out = io.StringIO()
        write_spe(table, out)
        assert out.getvalue() == "scheme,target_ec,spe_percent,images\n"

    def test_unknown_variant(self):
        with pytest.raises(ValueError):
            variant("pvo")


class TestMeasure:
    def test_dtle_nomed_beats_tle_on_standard_images(self, images):
        for name in ("lena", "baboon"):
            nomed = measure(images[name], name, variant("dtle-nomed"))
            tle = measure(images[name], name, variant("tle"))
            assert nomed.ec > tle.ec

    def test_unembeddable_image(self):
        rng = np.random.default_rng(0)
        noise = rng.integers(0, 256, size=(8, 8), dtype=np.uint8)
        r = measure(noise, "noise", variant("dtle"))
        assert r.ec == 0 and r.psnr_original == float("inf")

    def test_bundled_directory(self):
        report = bench(DATA_DIR, schemes=["tle"])
        assert report.ok and len(report.rows) == len(list(DATA_DIR.glob("*.pgm")))
