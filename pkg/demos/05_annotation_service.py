# Drive the annotation service end to end, in process: load datasets,
# submit codes, read progress, fetch suggestions, and pull an agreement
# report. The same API serves the browser workbench.

import tempfile
from importlib import resources
from pathlib import Path

from fastapi.testclient import TestClient

from turklex.service import AnnotationService, create_app

workdir = Path(tempfile.mkdtemp(prefix="turklex-demo-"))
for name in ("examples.tsv", "etymology_cases.tsv"):
    text = (resources.files("turklex") / "data" / name).read_text("utf-8")
    (workdir / name).write_text(text, encoding="utf-8")

client = TestClient(create_app(AnnotationService(workdir)))

print("datasets:", client.get("/datasets").json())

# Ask for a pre-fill suggestion, then submit codes built from it.
suggestion = client.get(
    "/suggest", params={"dataset": "examples", "entry_id": "chair", "tau": 0.6}
).json()
print("suggested classes for chair:", suggestion["classes"])

etymology = {"az": "R", "kk": "T", "ky": "T", "tt": "T",
             "tr": "A", "tk": "R", "ug": "T", "uz": "A"}
for slot_key, cognate_class in suggestion["classes"].items():
    lang = slot_key.split(":")[0]
    response = client.put("/annotations", json={
        "dataset_id": "examples", "annotator_id": "demo",
        "entry_id": "chair", "language": lang, "lexeme_index": 0,
        "code": f"{cognate_class}{etymology[lang]}",
    })
    assert response.json()["accepted"]

progress = client.get("/progress/demo", params={"dataset": "examples"}).json()
print("progress:", progress)

# A second annotator disagrees on one slot; the report quantifies it.
for lang in etymology:
    client.put("/annotations", json={
        "dataset_id": "examples", "annotator_id": "demo2",
        "entry_id": "chair", "language": lang, "lexeme_index": 0,
        "code": "1T" if lang == "az" else f"{suggestion['classes'][lang + ':0']}{etymology[lang]}",
    })

report = client.get(
    "/agreement", params={"dataset": "examples", "a": "demo", "b": "demo2"}
).json()
print("categories:", report["matrix"]["categories"])
print("counts:", report["matrix"]["counts"])
print("kappa:", report["kappa"]["kappa"])
print("cognate pair f1:", report["partition_agreement"]["pair_f1"])

# Everything submitted above is on disk in append-only logs:
for log in sorted((workdir / "logs" / "examples").glob("*.jsonl")):
    print(log.name, "->", len(log.read_text().splitlines()), "records")
