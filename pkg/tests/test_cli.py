"""End-to-end checks of the command-line front end on the bundled data files."""

from __future__ import annotations

from pathlib import Path

import pytest

from sfkit.cli import main, run_command

DATA = Path(__file__).resolve().parents[1] / "src" / "sfkit" / "data"


def data(name: str) -> str:
    return str(DATA / name)


def test_sfh_reports_rank_and_representatives():
    code, text = run_command(["sfh", data("annulus.sfd")])
    assert code == 0
    assert text.splitlines()[0] == "rank 2"


def test_validate_accepts_bundled_diagrams():
    for name in ("disk.sfd", "annulus.sfd", "two_holes.sfd", "unknot.sfd"):
        code, text = run_command(["validate", data(name)])
        assert code == 0 and text.startswith("valid"), name


def test_scripted_eh_demo_lists_the_eh_cycle():
    code_s, scripted = run_command(["script", data("empty.sfd"), data("eh_demo.script")])
    code_e, eh = run_command(["eh", data("annulus_minus.sob")])
    assert code_s == 0 and code_e == 0
    assert "via handles: agree" in eh
    image = next(line for line in scripted.splitlines() if line.startswith("{} -> "))
    eh_class = next(line for line in eh.splitlines() if line.startswith("EH "))
    assert image.split(" -> ")[1] == eh_class.split(" ", 1)[1]
    codomain = next(line for line in scripted.splitlines() if line.startswith("# codomain: "))
    count = next(line for line in eh.splitlines() if line.startswith("generators "))
    assert len(codomain.split()) - 2 == int(count.split()[1])


def test_dual_check_on_the_bundled_pair():
    code, text = run_command(["dual-check", data("f1.map"), data("f3_swapped.map")])
    assert code == 0 and "DUAL OK" in text


def test_trace_pipeline_matches_the_pairing():
    code, text = run_command(["trace", data("trace_triple.sfd")])
    assert code == 0 and "pipeline equals Kronecker pairing: yes" in text


def test_domain_error_exits_one():
    code, text = run_command(["handle", data("disk.sfd"), "H1", "e0@1/3", "e0@1/3"])
    assert code == 1 and "feet coincide" in text


def test_truncated_file_reports_a_line_number(tmp_path):
    lines = (DATA / "annulus.sfd").read_text().splitlines()[:5]
    path = tmp_path / "truncated.sfd"
    path.write_text("\n".join(lines) + "\n")
    code, text = run_command(["sfh", str(path)])
    assert code == 1
    assert "truncated.sfd:6:" in text


def test_unknown_command_exits_two():
    with pytest.raises(SystemExit) as info:
        main(["no-such-command"])
    assert info.value.code == 2
