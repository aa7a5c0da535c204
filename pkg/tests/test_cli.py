import json
from pathlib import Path

import pytest
from typer.testing import CliRunner

from app.cli import cli
from app.db.terms import Iri
from app.helpers.descriptions import emit_description
from app.helpers.service import ServiceHandler
from app.main import host_service
from app.models.Description import ServiceDescription
from app.scenario.fleet import ServiceFleet

runner = CliRunner()

BRAIN_MASK_PATTERN = (
    "?inputImage rdf:type sp:Category-3AHeadscan. "
    "?inputImage dc:format \"image/nrrd\". "
    "?brainAtlasImage rdf:type sp:Category-3ABrainAtlasImage. "
    "?brainAtlasMask rdf:type sp:Category-3ABrainAtlasMask."
)


@pytest.fixture(name="paths")
def paths_fixture(fixtures_dir: Path) -> dict[str, Path]:
    return {
        "seed": fixtures_dir / "kb" / "seed.nt",
        "registry": fixtures_dir / "descriptions",
        "final": fixtures_dir / "expected" / "final_kb.nt",
        "report": fixtures_dir / "expected" / "report.json",
        "brain_mask": fixtures_dir / "descriptions" / "brain_mask_generation.json",
        "temperature": fixtures_dir / "devices" / "temperature.json",
        "level1": fixtures_dir / "maturity" / "level1_json_only.json",
    }


def without_durations(report_text: str) -> dict:
    report = json.loads(report_text)
    for record in report["records"]:
        record.pop("durationMs")
    return report


# region run
def test_run_in_process(tmp_path: Path, paths: dict[str, Path]):
    report, final_kb = tmp_path / "report.json", tmp_path / "final.nt"

    result = runner.invoke(cli, [
        "run", "--kb", str(paths["seed"]), "--registry", str(paths["registry"]),
        "--report", str(report), "--final-kb", str(final_kb), "--in-process",
    ])

    assert result.exit_code == 0, result.output
    assert result.stdout.startswith("fixpoint after 6 rounds: 5 invocations, 28 triples")
    assert "round 3: RobustNormalization ok (+4)" in result.stdout
    assert final_kb.read_text(encoding="utf-8") == paths["final"].read_text(encoding="utf-8")
    assert without_durations(report.read_text(encoding="utf-8")) == json.loads(paths["report"].read_text(encoding="utf-8"))


def test_run_against_live_hosts(tmp_path: Path, paths: dict[str, Path], tpm_fleet: ServiceFleet):
    """The same pipeline over HTTP, each service on its own port."""
    registry = tmp_path / "registry"
    registry.mkdir()
    for description in tpm_fleet.registry:
        (registry / f"{description.name}.json").write_text(emit_description(description), encoding="utf-8")
    final_kb = tmp_path / "final.nt"

    result = runner.invoke(cli, [
        "run", "--kb", str(paths["seed"]), "--registry", str(registry),
        "--report", str(tmp_path / "report.json"), "--final-kb", str(final_kb),
    ])

    assert result.exit_code == 0, result.output
    assert final_kb.read_text(encoding="utf-8") == paths["final"].read_text(encoding="utf-8")
    assert sum(handler.backend_calls for handler in tpm_fleet.handlers.values()) == 5


@pytest.mark.parametrize(
    "only, expected",
    [
        (["--only", "BrainMaskGeneration"], ["BrainMaskGeneration"]),
        (["--only", "BrainMaskGeneration,BatchedFolderRegistration"], ["BrainMaskGeneration", "BatchedFolderRegistration"]),
        (["--only", "BrainMaskGeneration", "--only", "BatchedFolderRegistration"], ["BrainMaskGeneration", "BatchedFolderRegistration"]),
    ],
)
def test_run_only(tmp_path: Path, paths: dict[str, Path], only: list[str], expected: list[str]):
    report = tmp_path / "report.json"

    result = runner.invoke(cli, [
        "run", "--kb", str(paths["seed"]), "--registry", str(paths["registry"]),
        "--report", str(report), "--in-process", *only,
    ])

    assert result.exit_code == 0, result.output
    assert [r["key"]["service"] for r in json.loads(report.read_text(encoding="utf-8"))["records"]] == expected


def test_run_scope_excluding_everything(tmp_path: Path, paths: dict[str, Path]):
    report = tmp_path / "report.json"

    result = runner.invoke(cli, [
        "run", "--kb", str(paths["seed"]), "--registry", str(paths["registry"]),
        "--report", str(report), "--in-process",
        "--scope", "?inputImage tpm:patient <http://smartws.example.org/patients/p9> .",
    ])

    assert result.exit_code == 0, result.output
    assert json.loads(report.read_text(encoding="utf-8"))["records"] == []


def test_run_max_rounds_exits_one(tmp_path: Path, paths: dict[str, Path]):
    report = tmp_path / "report.json"

    result = runner.invoke(cli, [
        "run", "--kb", str(paths["seed"]), "--registry", str(paths["registry"]),
        "--report", str(report), "--in-process", "--max-rounds", "1",
    ])

    assert result.exit_code == 1
    assert json.loads(report.read_text(encoding="utf-8"))["terminatedBy"] == "max_rounds"


@pytest.mark.parametrize("broken", ["kb", "registry"])
def test_run_unreadable_input_exits_two(tmp_path: Path, paths: dict[str, Path], broken: str):
    arguments = {"kb": str(paths["seed"]), "registry": str(paths["registry"])}
    arguments[broken] = str(tmp_path / "missing")

    result = runner.invoke(cli, [
        "run", "--kb", arguments["kb"], "--registry", arguments["registry"],
        "--report", str(tmp_path / "report.json"),
    ])

    assert result.exit_code == 2
    assert not (tmp_path / "report.json").exists()


def test_run_invalid_scope_exits_two(tmp_path: Path, paths: dict[str, Path]):
    result = runner.invoke(cli, [
        "run", "--kb", str(paths["seed"]), "--registry", str(paths["registry"]),
        "--report", str(tmp_path / "report.json"), "--scope", "?x nowhere:p ?y .",
    ])

    assert result.exit_code == 2
    assert "Invalid pattern" in result.output
# endregion


# region match
def test_match(paths: dict[str, Path]):
    result = runner.invoke(cli, ["match", "--kb", str(paths["seed"]), "--pattern", BRAIN_MASK_PATTERN])

    assert result.exit_code == 0, result.output
    assert result.stdout.splitlines() == [
        "?brainAtlasImage\t?brainAtlasMask\t?inputImage",
        "<http://smartws.example.org/atlas/brain-atlas-image>\t"
        "<http://smartws.example.org/atlas/brain-atlas-mask>\t"
        "<http://smartws.example.org/patients/p1/headscan-1>",
    ]


def test_match_pattern_from_file(tmp_path: Path, paths: dict[str, Path]):
    pattern = tmp_path / "pattern.rq"
    pattern.write_text("?scan tpm:patient ?patient .\n", encoding="utf-8")

    result = runner.invoke(cli, ["match", "--kb", str(paths["seed"]), "--pattern", str(pattern)])

    assert result.exit_code == 0, result.output
    assert result.stdout.splitlines()[1:] == [
        "<http://smartws.example.org/patients/p1>\t<http://smartws.example.org/patients/p1/headscan-1>"
    ]


def test_match_without_solutions_prints_the_header(paths: dict[str, Path]):
    result = runner.invoke(cli, ["match", "--kb", str(paths["seed"]), "--pattern", "?x tpm:normalizationMethod ?m ."])

    assert result.exit_code == 0
    assert result.stdout.splitlines() == ["?m\t?x"]


@pytest.mark.parametrize("pattern", ["?x rdf:type", "?x nowhere:p ?y ."])
def test_match_invalid_pattern_exits_two(paths: dict[str, Path], pattern: str):
    result = runner.invoke(cli, ["match", "--kb", str(paths["seed"]), "--pattern", pattern])

    assert result.exit_code == 2
# endregion


# region classify
@pytest.mark.parametrize("name, level", [("level1", 1), ("brain_mask", 2), ("temperature", 3)])
def test_classify(paths: dict[str, Path], name: str, level: int):
    result = runner.invoke(cli, ["classify", "--desc", str(paths[name])])

    assert result.exit_code == 0, result.output
    assert json.loads(result.stdout)["level"] == level


def test_classify_probe(paths: dict[str, Path], brain_mask_description: ServiceDescription, brain_mask_handler: ServiceHandler, tmp_path: Path):
    with host_service(brain_mask_description, brain_mask_handler) as host:
        hosted = tmp_path / "hosted.json"
        hosted.write_text(
            emit_description(brain_mask_description.model_copy(update={"endpoint": Iri(host.endpoint)})),
            encoding="utf-8",
        )

        result = runner.invoke(cli, ["classify", "--desc", str(hosted), "--probe"])

    report = json.loads(result.stdout)
    assert report["probed"]
    assert report["level"] == 2


def test_classify_missing_file_exits_two(tmp_path: Path):
    result = runner.invoke(cli, ["classify", "--desc", str(tmp_path / "missing.json")])

    assert result.exit_code == 2
# endregion


# region knowledge base files
def test_kb_dump_is_canonical(tmp_path: Path, paths: dict[str, Path]):
    messy = tmp_path / "messy.nt"
    lines = paths["seed"].read_text(encoding="utf-8").splitlines()
    messy.write_text("# shuffled\n" + "\n".join(reversed(lines + lines[:2])) + "\n", encoding="utf-8")

    result = runner.invoke(cli, ["kb-dump", "--kb", str(messy)])

    assert result.exit_code == 0
    assert result.stdout == paths["seed"].read_text(encoding="utf-8")


def test_kb_diff(paths: dict[str, Path]):
    result = runner.invoke(cli, ["kb-diff", "--left", str(paths["seed"]), "--right", str(paths["final"])])

    lines = result.stdout.splitlines()
    assert result.exit_code == 0
    assert len(lines) == 21
    assert all(line.startswith("+ ") for line in lines)


def test_kb_diff_check(paths: dict[str, Path]):
    changed = runner.invoke(cli, ["kb-diff", "--left", str(paths["final"]), "--right", str(paths["seed"]), "--check"])
    same = runner.invoke(cli, ["kb-diff", "--left", str(paths["seed"]), "--right", str(paths["seed"]), "--check"])

    assert changed.exit_code == 1
    assert all(line.startswith("- ") for line in changed.stdout.splitlines())
    assert same.exit_code == 0
    assert same.stdout == ""


def test_kb_dump_syntax_error_exits_two(tmp_path: Path):
    broken = tmp_path / "broken.nt"
    broken.write_text("<http://a> <http://b> .\n", encoding="utf-8")

    result = runner.invoke(cli, ["kb-dump", "--kb", str(broken)])

    assert result.exit_code == 2
    assert "line 1" in result.output
# endregion


# region serve
def test_serve_unknown_handler(paths: dict[str, Path]):
    result = runner.invoke(cli, ["serve", "--desc", str(paths["brain_mask"]), "--handler", "nope", "--port", "0"])

    assert result.exit_code == 1
    assert "available: " in result.output
    assert "brain_mask" in result.output


def test_serve_invalid_description(tmp_path: Path):
    broken = tmp_path / "broken.json"
    broken.write_text("{\"name\": \"Broken\"}", encoding="utf-8")

    result = runner.invoke(cli, ["serve", "--desc", str(broken), "--handler", "brain_mask", "--port", "0"])

    assert result.exit_code == 1


def test_serve_handler_of_another_class(paths: dict[str, Path]):
    result = runner.invoke(cli, ["serve", "--desc", str(paths["temperature"]), "--handler", "brain_mask", "--port", "0"])

    assert result.exit_code == 1
    assert "implements" in result.output


def test_serve_port_in_use(paths: dict[str, Path], brain_mask_description: ServiceDescription, brain_mask_handler: ServiceHandler):
    with host_service(brain_mask_description, brain_mask_handler) as host:
        result = runner.invoke(cli, [
            "serve", "--desc", str(paths["brain_mask"]), "--handler", "brain_mask", "--port", str(host.port),
        ])

    assert result.exit_code == 1
    assert "Could not serve" in result.output
# endregion
