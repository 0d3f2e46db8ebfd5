import json

import pytest
from fastapi.testclient import TestClient

from graphilosophy.cli import main
from graphilosophy.config import Config
from graphilosophy.graph import load
from graphilosophy.server import make_app

from conftest import MINI_CORPUS, REPO_ROOT

MINI_EVAL = REPO_ROOT / "fixtures" / "benchmarks" / "mini_eval.jsonl"


@pytest.fixture(scope="module")
def built_graph(tmp_path_factory):
    out = tmp_path_factory.mktemp("cli") / "graph.jsonl"
    code = main(["build", "--corpus", str(MINI_CORPUS), "--out", str(out)])
    assert code == 0
    return out


class TestValidate:
    def test_clean_corpus_exits_zero(self, capsys):
        assert main(["validate", "--corpus", str(MINI_CORPUS)]) == 0
        out = capsys.readouterr().out
        assert "0 schema violations" in out

    def test_missing_corpus_is_bad_input(self, capsys):
        assert main(["validate", "--corpus", "/nonexistent"]) != 0
        assert "BAD_INPUT" in capsys.readouterr().err


class TestBuild:
    def test_build_twice_byte_identical(self, tmp_path):
        a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
        assert main(["build", "--corpus", str(MINI_CORPUS), "--out", str(a)]) == 0
        assert main(["build", "--corpus", str(MINI_CORPUS), "--out", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_output_has_config_header(self, built_graph):
        header = json.loads(built_graph.read_text(encoding="utf-8").splitlines()[0])
        assert header["record"] == "header"
        assert "config" in header and "seeds" in header
        assert header["corpus_hash"]

    def test_verification_queue_written(self, built_graph):
        queue = built_graph.with_name(built_graph.name + ".verify.jsonl")
        assert queue.exists()
        head = json.loads(queue.read_text(encoding="utf-8").splitlines()[0])
        assert head["kind"] == "verification_queue"


class TestStats:
    def test_table_and_record(self, built_graph, capsys):
        assert main(["stats", str(built_graph)]) == 0
        out = capsys.readouterr().out
        assert "density" in out
        record = json.loads(out.strip().splitlines()[-1])
        assert record["record"] == "stats"
        graph, _ = load(built_graph)
        from graphilosophy.graph import stats as stats_fn

        assert record["density"] == stats_fn(graph).density


class TestChunkCommand:
    def test_fixed_mode_on_text_file(self, tmp_path, capsys):
        src = tmp_path / "doc.txt"
        src.write_text(" ".join(f"t{i}" for i in range(100)), encoding="utf-8")
        out = tmp_path / "chunks.jsonl"
        code = main([
            "chunk", "--input", str(src), "--mode", "fixed",
            "--max-tokens", "32", "--overlap", "0", "--out", str(out),
        ])
        assert code == 0
        lines = out.read_text(encoding="utf-8").splitlines()
        head = json.loads(lines[0])
        assert head["record"] == "header"
        chunks = [json.loads(x) for x in lines[1:]]
        assert [c["token_count"] for c in chunks] == [32, 32, 32, 4]

    def test_adaptive_mode_on_commentary_jsonl(self, capsys):
        code = main([
            "chunk", "--input", str(MINI_CORPUS / "commentary.jsonl"), "--mode", "adaptive",
        ])
        assert code == 0
        lines = capsys.readouterr().out.strip().splitlines()
        records = [json.loads(x) for x in lines[1:]]
        assert {r["source_id"] for r in records} == {"C001", "C002", "C003"}
        assert all(r["method"] == "Adaptive" for r in records)

    def test_missing_input_is_bad_input(self, capsys):
        assert main(["chunk", "--input", "/nonexistent.txt"]) != 0
        assert "BAD_INPUT" in capsys.readouterr().err

    def test_empty_input_is_bad_input(self, tmp_path, capsys):
        src = tmp_path / "empty.txt"
        src.write_text("   ", encoding="utf-8")
        assert main(["chunk", "--input", str(src)]) != 0
        assert "BAD_INPUT" in capsys.readouterr().err


class TestQueryCommand:
    def test_graph_json_output_parses(self, built_graph, capsys):
        code = main([
            "query", "--graph", str(built_graph), "--text", "克己復禮為仁",
            "--mode", "auto", "--depth", "1", "--format", "graph-json",
        ])
        assert code == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["seeds"]
        assert payload["schema_version"] == 1

    def test_table_output(self, built_graph, capsys):
        code = main(["query", "--graph", str(built_graph), "--text", "仁", "--mode", "exact"])
        assert code == 0
        assert "nodes" in capsys.readouterr().out


class TestEvalCommand:
    def test_missing_benchmark_is_bad_input(self, built_graph, capsys):
        code = main([
            "eval", "--graph", str(built_graph), "--benchmark", "/nonexistent.jsonl",
        ])
        assert code != 0
        assert "BAD_INPUT" in capsys.readouterr().err

    def test_bundled_mini_benchmark_runs(self, built_graph, capsys):
        code = main([
            "eval", "--graph", str(built_graph), "--benchmark", str(MINI_EVAL),
            "--methods", "bm25,semantic,hybrid", "--k", "1,3,5,10",
        ])
        assert code == 0
        out = capsys.readouterr().out
        record = json.loads(out.strip().splitlines()[-1])
        assert set(record["methods"]) == {"bm25", "semantic", "hybrid"}
        assert record["methods"]["semantic"]["P@1"] > 0.5


class TestExportCommand:
    def test_export_payload_matches_server_body_bit_exact(self, built_graph, tmp_path):
        seed = "SENTENCE:LY.1-4.2.1"
        out = tmp_path / "export.json"
        code = main([
            "export", "--graph", str(built_graph), "--out", str(out),
            "--seed", seed, "--depth", "1",
        ])
        assert code == 0
        lines = out.read_text(encoding="utf-8").splitlines()
        assert json.loads(lines[0])["kind"] == "export"
        graph, _ = load(built_graph)
        client = TestClient(make_app(graph, Config()))
        body = client.get("/subgraph", params={"seed": seed, "depth": 1}).content
        assert lines[1].encode("utf-8") == body

    def test_whole_graph_export(self, built_graph, tmp_path):
        out = tmp_path / "all.json"
        assert main(["export", "--graph", str(built_graph), "--out", str(out)]) == 0
        payload = json.loads(out.read_text(encoding="utf-8").splitlines()[1])
        graph, _ = load(built_graph)
        assert len(payload["nodes"]) == graph.node_count
        assert len(payload["edges"]) == graph.edge_count

    def test_unknown_seed_is_bad_input(self, built_graph, tmp_path, capsys):
        out = tmp_path / "x.json"
        code = main([
            "export", "--graph", str(built_graph), "--out", str(out), "--seed", "SENTENCE:nope",
        ])
        assert code != 0
        assert "BAD_INPUT" in capsys.readouterr().err


class TestConfigPrecedence:
    def test_env_overrides_flag_for_bind(self, monkeypatch, built_graph):
        from graphilosophy.cli import _load_cfg, build_parser

        monkeypatch.setenv("GRAPHILOSOPHY_BIND", "0.0.0.0:9999")
        args = build_parser().parse_args(
            ["serve", "--graph", str(built_graph), "--bind", "127.0.0.1:1234"]
        )
        cfg = _load_cfg(args)
        assert cfg.bind == "0.0.0.0:9999"

    def test_config_file_then_flags(self, tmp_path):
        from graphilosophy.cli import _load_cfg, build_parser

        cfg_file = tmp_path / "graphilosophy.toml"
        cfg_file.write_text("embed_dim = 128\nseed = 7\n", encoding="utf-8")
        args = build_parser().parse_args(
            ["--config", str(cfg_file), "build", "--corpus", "x", "--out", "y", "--seed", "9"]
        )
        cfg = _load_cfg(args)
        assert cfg.embed_dim == 128
        assert cfg.seed == 9  # flag wins over file
