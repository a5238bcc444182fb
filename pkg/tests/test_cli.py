import csv
import http.server
import threading

import numpy as np
import pytest

from shiftcorr.cli import main, parse_grid
from shiftcorr.errors import ConfigError
from shiftcorr.zero_data import bundled_zeros, format_zero_file


def rows(path):
    lines = path.read_text().splitlines()
    assert lines[0].startswith("# shiftcorr ") and " config=" in lines[0]
    return list(csv.reader(lines[1:]))


def test_parse_grid():
    assert parse_grid("1,2,5") == (1.0, 2.0, 5.0)
    assert parse_grid("0:1:3") == (0.0, 0.5, 1.0)
    assert parse_grid("log:1:100:3") == pytest.approx((1.0, 10.0, 100.0))
    for bad in ("", "3,2", "1:2", "a,b"):
        with pytest.raises(ConfigError):
            parse_grid(bad)


def test_empty_lambda_grid(tmp_path):
    cfg = tmp_path / "c.ini"
    cfg.write_text("[run]\nlambda =\n")
    assert main(["figure1", "--config", str(cfg), "--out-dir", str(tmp_path)]) == 2
    with pytest.raises(SystemExit) as exc:
        main(["figure1", "--lambda", "", "--out-dir", str(tmp_path)])
    assert exc.value.code == 2


def test_figure1_single_point(tmp_path):
    assert main(["figure1", "--lambda", "1", "--T", "200", "--x", "10", "--out-dir", str(tmp_path)]) == 0
    r = rows(tmp_path / "figure1.csv")
    assert r[0] == ["lambda", "T", "x", "lhs_re", "main", "ratio"]
    assert len(r) == 2 and r[1][:3] == ["1.0", "200.0", "10.0"]
    assert (tmp_path / "figure1.svg").read_text().startswith("<svg")


def test_figure2_single_alpha_and_refusal(tmp_path):
    assert main(["figure2", "--alpha-grid", "0.25", "--T", "200", "--out-dir", str(tmp_path)]) == 0
    r = rows(tmp_path / "figure2.csv")
    assert r[0] == ["alpha", "f_empirical", "pred_paper", "pred_derivation"] and len(r) == 2
    w = rows(tmp_path / "figure2_winner.csv")
    assert w[1][7] in ("paper", "derivation")
    assert main(["figure2", "--lambda", "0", "--out-dir", str(tmp_path)]) == 2


def test_figure3_missing_data(tmp_path):
    assert main(["figure3", "--T", "6000", "--out-dir", str(tmp_path)]) == 3


def test_config_and_flag_precedence(tmp_path):
    cfg = tmp_path / "c.ini"
    cfg.write_text("[form]\nlabel = delta\n[run]\nlambda = 0.5\nx = 100,1000\n")
    out = tmp_path / "o"
    assert main(["psi", "--config", str(cfg), "--lambda", "2", "--out-dir", str(out)]) == 0
    r = rows(out / "psi.csv")
    assert r[0] == ["x", "lambda", "psi", "psi1", "psi2", "remainder", "main_term", "ratio"]
    assert [row[:2] for row in r[1:]] == [["100.0", "2.0"], ["1000.0", "2.0"]]
    cfg.write_text("[run]\nbogus = 1\n")
    assert main(["psi", "--config", str(cfg), "--out-dir", str(out)]) == 2
    assert main(["psi", "--form", "37.a1", "--out-dir", str(out)]) == 2


def test_global_flags_before_subcommand(tmp_path):
    assert main(["--out-dir", str(tmp_path), "predict", "--alpha-grid", "0.1,0.2"]) == 0
    r = rows(tmp_path / "predict.csv")
    assert r[0] == ["alpha", "prediction_paper", "prediction_derivation", "A_lambda", "theta_lambda"]
    assert len(r) == 3


def test_deterministic_output(tmp_path):
    for d in ("a", "b"):
        assert main(["psi", "--x", "500,2000", "--lambda", "1", "--out-dir", str(tmp_path / d)]) == 0
    assert (tmp_path / "a" / "psi.csv").read_bytes() == (tmp_path / "b" / "psi.csv").read_bytes()


def test_budget_exit(tmp_path):
    args = ["double-sum", "--T", "100", "--x", "5", "--pair-budget", "10", "--out-dir", str(tmp_path)]
    assert main(args) == 4


def test_coeffs(tmp_path):
    assert main(["coeffs", "--form", "11.a2", "--n-max", "5", "--out-dir", str(tmp_path)]) == 0
    assert (tmp_path / "coeffs_11.a2.txt").read_text() == "2 11 11.a2\n1 1\n2 -2\n3 -1\n4 2\n5 1\n"


def test_other_subcommands(tmp_path):
    out = str(tmp_path)
    assert main(["sato-tate", "--x", "1000,5000", "--out-dir", out]) == 0
    s = rows(tmp_path / "sato_tate.csv")
    assert len(s) == 3 and s[0][2] == "sup_discrepancy"
    assert main(["lg-compare", "--T", "300", "--x", "1.5:3.5:21", "--out-dir", out]) == 0
    assert len(rows(tmp_path / "lg_compare.csv")) == 22
    assert main(["double-sum", "--T", "100", "--x", "3,5", "--no-diagonal", "--out-dir", out]) == 0
    assert len(rows(tmp_path / "double_sum.csv")) == 3
    assert main(["pair-correlation", "--T", "100", "--lambda", "0.5,1", "--alpha-grid", "0.1,0.2",
                 "--out-dir", out]) == 0
    assert len(rows(tmp_path / "pair_correlation.csv")) == 5


@pytest.fixture
def zero_server(tmp_path, ec11):
    root = tmp_path / "srv"
    root.mkdir()
    zl = bundled_zeros("11.a2", spec=ec11)
    (root / "11.a2.txt").write_text(format_zero_file(zl, "11.a2"))
    hits = []

    class Handler(http.server.SimpleHTTPRequestHandler):
        def __init__(self, *a, **kw):
            super().__init__(*a, directory=str(root), **kw)

        def log_message(self, *a):
            pass

        def do_GET(self):
            hits.append(self.path)
            super().do_GET()

    httpd = http.server.ThreadingHTTPServer(("127.0.0.1", 0), Handler)
    threading.Thread(target=httpd.serve_forever, daemon=True).start()
    yield f"http://127.0.0.1:{httpd.server_address[1]}/{{label}}.txt", hits
    httpd.shutdown()


def test_fetch_and_cache_hit_rerun(tmp_path, zero_server):
    url, hits = zero_server
    cache = str(tmp_path / "cache")
    base = ["--zero-url", url, "--cache-dir", cache]
    assert main(["fetch", "--T", "300", "--lambda", "1", *base]) == 0
    assert len(hits) == 1
    outs = []
    for d in ("r1", "r2"):
        out = tmp_path / d
        assert main(["figure2", "--T", "300", "--alpha-grid", "0.1:0.2:3", *base, "--out-dir", str(out)]) == 0
        outs.append((out / "figure2.csv").read_bytes())
    assert outs[0] == outs[1]
    assert len(hits) == 1
    assert main(["fetch", "--T", "5000", *base]) == 3
