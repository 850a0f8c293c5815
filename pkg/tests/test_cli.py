"""Command line interface: exit codes, certificate plumbing, determinism."""

from __future__ import annotations

import pytest

from lineembed.cli import main
from lineembed.formats import (
    parse_cnf,
    parse_mapping,
    parse_model_cert,
    parse_ordering_cert,
    parse_signed_graph,
)
from lineembed.reductions import sat_to_setsplitting

P3_TEXT = "p sg 3 2 1\ne + 1 2\ne + 2 3\ne - 1 3\n"
CLAW_TEXT = (
    "p sg 4 3 3\n"
    "e + 1 2\ne + 1 3\ne + 1 4\n"
    "e - 2 3\ne - 2 4\ne - 3 4\n"
)
XYZ_TEXT = "p cnf 3 1\n1 2 3 0\n"
TWO_CYCLE_TEXT = "p dg 2 2\na 1 2\na 2 1\n"


def run(capsys, *argv: str) -> tuple[int, str, str]:
    rc = main(list(argv))
    captured = capsys.readouterr()
    return rc, captured.out, captured.err


def write(tmp_path, name: str, text: str) -> str:
    path = tmp_path / name
    path.write_text(text)
    return str(path)


class TestSolve:
    def test_auto_complete_route(self, tmp_path, capsys) -> None:
        inst = write(tmp_path, "p3.sg", P3_TEXT)
        rc, out, _ = run(capsys, "solve", inst)
        assert rc == 0
        ordering = parse_ordering_cert(out)
        assert ordering is not None and len(ordering) == 3

    def test_dp_frozen(self, tmp_path, capsys) -> None:
        inst = write(tmp_path, "p3.sg", P3_TEXT)
        rc, out, _ = run(capsys, "solve", inst, "--algo", "dp")
        assert rc == 0
        assert out == "o 3 2 1\n"

    def test_infeasible_both_routes(self, tmp_path, capsys) -> None:
        inst = write(tmp_path, "claw.sg", CLAW_TEXT)
        for algo in ("auto", "dp", "brute", "complete"):
            rc, out, _ = run(capsys, "solve", inst, "--algo", algo)
            assert rc == 0
            assert out == "o INFEASIBLE\n"

    def test_out_file(self, tmp_path, capsys) -> None:
        inst = write(tmp_path, "p3.sg", P3_TEXT)
        dest = tmp_path / "cert.txt"
        rc, out, _ = run(capsys, "solve", inst, "--out", str(dest))
        assert rc == 0 and out == ""
        assert parse_ordering_cert(dest.read_text()) is not None

    def test_model_output_verifies(self, tmp_path, capsys) -> None:
        inst = write(tmp_path, "p3.sg", P3_TEXT)
        model_path = tmp_path / "model.txt"
        rc, _, _ = run(capsys, "solve", inst, "--model", str(model_path))
        assert rc == 0
        parse_model_cert(model_path.read_text())
        rc, out, _ = run(capsys, "verify", inst, str(model_path))
        assert rc == 0 and out == "VALID\n"

    def test_model_on_infeasible_is_usage_error(self, tmp_path, capsys) -> None:
        inst = write(tmp_path, "claw.sg", CLAW_TEXT)
        rc, _, err = run(capsys, "solve", inst, "--model", str(tmp_path / "m"))
        assert rc == 2 and "error" in err

    def test_complete_algo_needs_complete_graph(self, tmp_path, capsys) -> None:
        inst = write(tmp_path, "path.sg", "p sg 3 1 0\ne + 1 2\n")
        rc, _, err = run(capsys, "solve", inst, "--algo", "complete")
        assert rc == 2 and "complete" in err

    def test_brute_cap(self, tmp_path, capsys) -> None:
        rc, out, _ = run(
            capsys, "gen", "random-sg", "--n", "11", "--seed", "4",
            "--out", str(tmp_path / "big.sg"),
        )
        assert rc == 0
        rc, _, err = run(capsys, "solve", str(tmp_path / "big.sg"), "--algo", "brute")
        assert rc == 4 and "cap" in err
        rc, _, _ = run(
            capsys, "solve", str(tmp_path / "big.sg"), "--algo", "brute",
            "--cap", "11",
        )
        assert rc == 0

    def test_dp_table_beyond_memory(self, tmp_path, capsys) -> None:
        # Under the 64-vertex cap, but the 2^58-entry table cannot be
        # allocated; the failure must surface as a clean resource error.
        inst = write(tmp_path, "huge.sg", "p sg 58 0 0\n")
        rc, _, err = run(capsys, "solve", inst, "--algo", "dp")
        assert rc == 4 and "memory" in err

    def test_missing_file(self, capsys) -> None:
        rc, _, err = run(capsys, "solve", "/nonexistent/file.sg")
        assert rc == 2 and "cannot read" in err

    def test_malformed_instance(self, tmp_path, capsys) -> None:
        inst = write(tmp_path, "bad.sg", "p sg 2 1 0\ne + 1\n")
        rc, _, err = run(capsys, "solve", inst)
        assert rc == 3 and "bad.sg" in err


class TestVerify:
    def test_ordering_valid(self, tmp_path, capsys) -> None:
        inst = write(tmp_path, "p3.sg", P3_TEXT)
        cert = write(tmp_path, "ok.cert", "o 1 2 3\n")
        rc, out, _ = run(capsys, "verify", inst, cert)
        assert rc == 0 and out == "VALID\n"

    def test_ordering_invalid_names_the_witness(self, tmp_path, capsys) -> None:
        inst = write(tmp_path, "p3.sg", P3_TEXT)
        cert = write(tmp_path, "bad.cert", "o 2 1 3\n")
        rc, out, _ = run(capsys, "verify", inst, cert)
        assert rc == 1
        assert out.startswith("INVALID") and "vertex 3" in out

    def test_ordering_wrong_length(self, tmp_path, capsys) -> None:
        inst = write(tmp_path, "p3.sg", P3_TEXT)
        cert = write(tmp_path, "short.cert", "o 2 1\n")
        rc, _, err = run(capsys, "verify", inst, cert)
        assert rc == 3 and "3" in err

    def test_infeasibility_claim_rejected(self, tmp_path, capsys) -> None:
        inst = write(tmp_path, "p3.sg", P3_TEXT)
        cert = write(tmp_path, "claim.cert", "o INFEASIBLE\n")
        rc, _, err = run(capsys, "verify", inst, cert)
        assert rc == 2 and "infeasibility" in err

    def test_model_against_incomplete(self, tmp_path, capsys) -> None:
        inst = write(tmp_path, "sparse.sg", "p sg 2 0 0\n")
        cert = write(tmp_path, "m.cert", "i 1 1/1 3/2\ni 2 2/1 5/2\n")
        rc, out, _ = run(capsys, "verify", inst, cert)
        assert rc == 1 and "INVALID" in out

    def test_model_size_mismatch(self, tmp_path, capsys) -> None:
        inst = write(tmp_path, "p3.sg", P3_TEXT)
        cert = write(tmp_path, "m.cert", "i 1 1/1 3/2\ni 2 2/1 5/2\n")
        rc, _, _ = run(capsys, "verify", inst, cert)
        assert rc == 3

    def test_splitter(self, tmp_path, capsys) -> None:
        inst = write(tmp_path, "s.ss", "p ss 3 2\ns 2 1 2\ns 2 2 3\n")
        good = write(tmp_path, "good.cert", "x 2\n")
        bad = write(tmp_path, "bad.cert", "x 1\n")
        foreign = write(tmp_path, "foreign.cert", "x 9\n")
        assert run(capsys, "verify", inst, good)[:2] == (0, "VALID\n")
        rc, out, _ = run(capsys, "verify", inst, bad)
        assert rc == 1 and "set 2" in out
        assert run(capsys, "verify", inst, foreign)[0] == 1

    def test_partition(self, tmp_path, capsys) -> None:
        inst = write(tmp_path, "d.dg", TWO_CYCLE_TEXT)
        good = write(tmp_path, "good.cert", "part 1 1\npart 2 2\n")
        bad = write(tmp_path, "bad.cert", "part 1 1 2\npart 2\n")
        assert run(capsys, "verify", inst, good)[:2] == (0, "VALID\n")
        rc, out, _ = run(capsys, "verify", inst, bad)
        assert rc == 1 and "cycle" in out

    def test_partition_size_mismatch(self, tmp_path, capsys) -> None:
        inst = write(tmp_path, "d.dg", TWO_CYCLE_TEXT)
        cert = write(tmp_path, "c.cert", "part 1 1\npart 2 2 3\n")
        assert run(capsys, "verify", inst, cert)[0] == 3

    def test_assignment(self, tmp_path, capsys) -> None:
        inst = write(tmp_path, "f.cnf", "p cnf 2 2\n1 2 0\n-1 0\n")
        good = write(tmp_path, "good.cert", "v -1 2 0\n")
        bad = write(tmp_path, "bad.cert", "v 1 -2 0\n")
        short = write(tmp_path, "short.cert", "v 1 0\n")
        assert run(capsys, "verify", inst, good)[:2] == (0, "VALID\n")
        rc, out, _ = run(capsys, "verify", inst, bad)
        assert rc == 1 and "clause 2" in out
        assert run(capsys, "verify", inst, short)[0] == 3

    def test_kind_mismatch(self, tmp_path, capsys) -> None:
        inst = write(tmp_path, "f.cnf", XYZ_TEXT)
        cert = write(tmp_path, "o.cert", "o 1\n")
        rc, _, err = run(capsys, "verify", inst, cert)
        assert rc == 2 and "does not apply" in err


class TestReduce:
    def test_sat2ss_golden(self, tmp_path, capsys) -> None:
        inst = write(tmp_path, "f.cnf", XYZ_TEXT)
        map_path = tmp_path / "f.map"
        rc, out, _ = run(capsys, "reduce", "sat2ss", inst, "--map", str(map_path))
        assert rc == 0
        assert out == (
            "p ss 7 4\nx special 7\ns 2 1 2\ns 2 3 4\ns 2 5 6\ns 4 1 3 5 7\n"
        )
        _, expected = sat_to_setsplitting(parse_cnf(XYZ_TEXT))
        assert parse_mapping(map_path.read_text()) == expected

    def test_sat2lce_header(self, tmp_path, capsys) -> None:
        inst = write(tmp_path, "f.cnf", XYZ_TEXT)
        rc, out, _ = run(capsys, "reduce", "sat2lce", inst)
        assert rc == 0
        assert out.startswith("p sg 48 60 47\n")
        parse_signed_graph(out)

    def test_self_loop_is_usage_error(self, tmp_path, capsys) -> None:
        inst = write(tmp_path, "loop.dg", "p dg 1 1\na 1 1\n")
        rc, _, err = run(capsys, "reduce", "adp2lce", inst)
        assert rc == 2 and "self-loop" in err

    def test_kind_mismatch(self, tmp_path, capsys) -> None:
        inst = write(tmp_path, "d.dg", TWO_CYCLE_TEXT)
        rc, _, err = run(capsys, "reduce", "sat2ss", inst)
        assert rc == 2 and "cnf" in err


class TestLift:
    def test_adp_chain(self, tmp_path, capsys) -> None:
        inst = write(tmp_path, "d.dg", TWO_CYCLE_TEXT)
        gadget = str(tmp_path / "g.sg")
        mapping = str(tmp_path / "g.map")
        cert = str(tmp_path / "g.cert")
        lifted = str(tmp_path / "g.part")
        assert run(
            capsys, "reduce", "adp2lce", inst, "--out", gadget, "--map", mapping
        )[0] == 0
        assert run(capsys, "solve", gadget, "--out", cert)[0] == 0
        rc, _, _ = run(capsys, "lift", mapping, cert, "--out", lifted)
        assert rc == 0
        rc, out, _ = run(capsys, "verify", inst, lifted)
        assert rc == 0 and out == "VALID\n"

    def test_ss_stage_frozen(self, tmp_path, capsys) -> None:
        inst = write(tmp_path, "s.ss", "p ss 2 1\ns 2 1 2\n")
        mapping = str(tmp_path / "s.map")
        assert run(capsys, "reduce", "ss2adp", inst, "--map", mapping)[0] == 0
        cert = write(tmp_path, "p.cert", "part 1 1 4\npart 2 2 3\n")
        rc, out, _ = run(capsys, "lift", mapping, cert)
        assert rc == 0 and out == "x 1\n"

    def test_composed_chain_frozen(self, tmp_path, capsys) -> None:
        inst = write(tmp_path, "x.cnf", "p cnf 1 1\n1 0\n")
        gadget = str(tmp_path / "x.sg")
        mapping = str(tmp_path / "x.map")
        cert = str(tmp_path / "x.cert")
        assert run(
            capsys, "reduce", "sat2lce", inst, "--out", gadget, "--map", mapping
        )[0] == 0
        assert run(capsys, "solve", gadget, "--out", cert)[0] == 0
        rc, out, _ = run(capsys, "lift", mapping, cert)
        assert rc == 0 and out == "v 1 0\n"
        lifted = write(tmp_path, "x.v", out)
        assert run(capsys, "verify", inst, lifted)[:2] == (0, "VALID\n")

    def test_invalid_cert(self, tmp_path, capsys) -> None:
        inst = write(tmp_path, "d.dg", TWO_CYCLE_TEXT)
        mapping = str(tmp_path / "g.map")
        assert run(capsys, "reduce", "adp2lce", inst, "--map", mapping)[0] == 0
        cert = write(tmp_path, "bad.cert", "o 1 2 3 4 5\n")
        rc, out, _ = run(capsys, "lift", mapping, cert)
        assert rc == 1 and "INVALID" in out

    def test_infeasibility_claim_rejected(self, tmp_path, capsys) -> None:
        inst = write(tmp_path, "d.dg", TWO_CYCLE_TEXT)
        mapping = str(tmp_path / "g.map")
        assert run(capsys, "reduce", "adp2lce", inst, "--map", mapping)[0] == 0
        cert = write(tmp_path, "claim.cert", "o INFEASIBLE\n")
        rc, _, err = run(capsys, "lift", mapping, cert)
        assert rc == 2 and "lifted" in err

    def test_cert_kind_mismatch(self, tmp_path, capsys) -> None:
        inst = write(tmp_path, "f.cnf", XYZ_TEXT)
        mapping = str(tmp_path / "f.map")
        assert run(capsys, "reduce", "sat2ss", inst, "--map", mapping)[0] == 0
        cert = write(tmp_path, "o.cert", "o 1\n")
        rc, _, err = run(capsys, "lift", mapping, cert)
        assert rc == 2 and "splitter" in err


class TestGen:
    def test_byte_identical(self, capsys) -> None:
        args = ("gen", "random-sg", "--n", "8", "--seed", "3")
        first = run(capsys, *args)
        second = run(capsys, *args)
        assert first == second and first[0] == 0

    def test_stdout_matches_file(self, tmp_path, capsys) -> None:
        rc, out, _ = run(capsys, "gen", "planted-complete", "--n", "5", "--seed", "2")
        assert rc == 0
        dest = tmp_path / "g.sg"
        run(
            capsys, "gen", "planted-complete", "--n", "5", "--seed", "2",
            "--out", str(dest),
        )
        assert dest.read_text() == out
        assert "spread=1.25" in out

    def test_cnf_output_parses(self, capsys) -> None:
        rc, out, _ = run(
            capsys, "gen", "random-cnf", "--vars", "4", "--clauses", "5",
            "--seed", "9",
        )
        assert rc == 0
        assert parse_cnf(out).num_vars == 4

    def test_comment_header_present(self, capsys) -> None:
        rc, out, _ = run(capsys, "gen", "random-sg", "--n", "4", "--seed", "0")
        assert rc == 0
        assert out.startswith("c random-sg n=4 ")

    def test_bad_parameters(self, capsys) -> None:
        rc, _, err = run(
            capsys, "gen", "random-sg", "--n", "4", "--p-pos", "0.9",
            "--p-neg", "0.9", "--seed", "0",
        )
        assert rc == 2 and "p_pos" in err


class TestBenchCommand:
    def test_small_run(self, capsys) -> None:
        rc, out, _ = run(
            capsys, "bench", "--min-n", "6", "--max-n", "7", "--per-size", "2"
        )
        assert rc == 0
        lines = out.strip().split("\n")
        assert lines[0].startswith("bench n=6 runs=2 median_ms=")
        assert lines[1].startswith("bench n=7 runs=2 median_ms=")
        assert lines[2].startswith("bench ratio-median=")

    def test_bad_range(self, capsys) -> None:
        rc, _, err = run(capsys, "bench", "--min-n", "8", "--max-n", "7")
        assert rc == 2 and "min-n" in err


class TestArgparseBehaviour:
    def test_unknown_stage_exits_two(self, capsys) -> None:
        with pytest.raises(SystemExit) as exc:
            main(["reduce", "nonsense", "x"])
        assert exc.value.code == 2
        capsys.readouterr()
