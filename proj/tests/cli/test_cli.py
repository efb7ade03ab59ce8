"""End-to-end checks of the extractbench command line.

    python3 test_cli.py <extractbench binary> <tests/data dir>
"""

import json
import os
import subprocess
import sys
import tempfile

EXE = sys.argv[1]
DATA = sys.argv[2]
failures = []


def run(*args, env=None):
    return subprocess.run([EXE, *args], capture_output=True, text=True, env=env, timeout=300)


def check(name, cond, detail=""):
    print(("ok   " if cond else "FAIL ") + name)
    if not cond:
        failures.append(name)
        if detail:
            print("     " + detail.strip().replace("\n", "\n     "))


def data(*parts):
    return os.path.join(DATA, *parts)


def test_score(tmp):
    schema = data("appendix", "example3_schema.json")
    gold = data("appendix", "example3_gold.json")
    r = run("score", "--schema", schema, "--gold", gold, "--prediction", gold)
    check("score exact prediction", r.returncode == 0 and json.loads(r.stdout)["total"] == 1.0, r.stderr)

    bad = os.path.join(tmp, "bad.txt")
    with open(bad, "w") as f:
        f.write("not json at all")
    r = run("score", "--schema", schema, "--gold", gold, "--prediction", bad)
    out = json.loads(r.stdout) if r.returncode == 0 else {}
    check("score gate failure exits 0", r.returncode == 0 and out.get("gate") == "InvalidJson" and out.get("total") == 0)

    broken = os.path.join(tmp, "schema.json")
    with open(broken, "w") as f:
        f.write('{"type": "object", "properties": {"a": {"type": "strnig"}}}')
    r = run("score", "--schema", broken, "--gold", gold, "--prediction", gold)
    check("malformed schema exits 2", r.returncode == 2 and "MalformedSchema" in r.stderr, r.stderr)

    r = run("score", "--schema", schema, "--gold", gold)
    check("missing option exits 2", r.returncode == 2)
    r = run("score", "--schema", schema, "--gold", gold, "--prediction", os.path.join(tmp, "nope"))
    check("missing file exits 2", r.returncode == 2, r.stderr)


def test_evaluate(tmp):
    expected = json.load(open(data("golden", "expected.json")))
    outs = []
    for workers in ("1", "8", "8"):
        out = os.path.join(tmp, "report-%d.json" % len(outs))
        r = run("--workers", workers, "evaluate", "--tasks", data("golden", "tasks.jsonl"),
                "--predictions", data("golden", "predictions.jsonl"), "--model-name", "replay", "-o", out)
        check("evaluate workers=%s" % workers, r.returncode == 0, r.stderr)
        outs.append(open(out, "rb").read())
    report = json.loads(outs[0])
    check("evaluate mean matches oracle", abs(report["mean_reward"] - expected["mean_reward"]) <= 1e-9)
    check("evaluate validity matches oracle", abs(report["json_validity"] - expected["json_validity"]) <= 1e-12)
    check("evaluate byte identical across runs", outs[0] == outs[1] == outs[2])

    r = run("--parse-mode", "strict", "evaluate", "--tasks", data("golden", "tasks.jsonl"),
            "--predictions", data("golden", "predictions.jsonl"))
    strict = json.loads(r.stdout)
    check("strict mode lowers validity", strict["json_validity"] < report["json_validity"])
    check("strict mode changes the fingerprint", strict["config_fingerprint"] != report["config_fingerprint"])


def test_compare():
    reports = [data("reports", n) for n in ("base.json", "sft.json", "grpo.json")]
    r = run("compare", *reports)
    check("compare prints table", r.returncode == 0 and "+118.5%" in r.stdout and "+147.0%" in r.stdout, r.stdout)
    r = run("compare", "--json", *reports)
    rows = json.loads(r.stdout)["rows"]
    check("compare json", [x["relative_improvement_text"] for x in rows] == ["Baseline", "+118.5%", "+147.0%"])
    r = run("compare", reports[0], data("reports", "other_config.json"))
    check("compare fingerprint mismatch", r.returncode == 1 and "FingerprintMismatch" in r.stderr, r.stderr)
    r = run("compare", reports[0])
    check("compare needs two reports", r.returncode == 2)


def test_simulate():
    r = run("simulate-kl")
    trace = json.loads(r.stdout)
    check("simulate-kl enters the band", r.returncode == 0 and trace["entered_band_at"] is not None
          and trace["entered_band_at"] <= 50)
    r = run("simulate-kl", "--elasticity", "-1")
    check("simulate-kl inverse plant never settles", json.loads(r.stdout)["entered_band_at"] is None)


def test_chunk(tmp):
    doc = os.path.join(tmp, "doc.txt")
    with open(doc, "w") as f:
        f.write("x" * 4000)
    r = run("chunk", doc)
    chunks = json.loads(r.stdout)
    check("chunk boundaries", [(c["start"], c["end"]) for c in chunks] == [(0, 2000), (1800, 3800), (3600, 4000)])
    check("chunk doc id from file name", chunks[0]["doc_id"] == "doc")
    empty = os.path.join(tmp, "empty.txt")
    open(empty, "w").close()
    r = run("chunk", empty)
    check("empty document exits 2", r.returncode == 2 and "EmptyDocument" in r.stderr, r.stderr)
    r = run("chunk", doc, "--size", "100", "--overlap", "100")
    check("bad overlap exits 2", r.returncode == 2)


def test_augment_and_split(tmp):
    conf = data("augment", "augment.conf")
    out = os.path.join(tmp, "aug.jsonl")
    r = run("--config", conf, "augment", "--corpus", data("augment", "corpus.jsonl"), "-o", out)
    check("augment runs", r.returncode == 0, r.stderr)
    summary = json.loads(r.stderr)
    lines = [json.loads(l) for l in open(out) if l.strip()]
    check("augment summary counts", summary["draws"] == 96 and summary["emitted"] == len(lines))
    check("augment budget", all(532 <= x["token_count"] <= 1900 for x in lines))

    again = os.path.join(tmp, "aug2.jsonl")
    run("--config", conf, "--workers", "4", "augment", "--corpus", data("augment", "corpus.jsonl"), "-o", again)
    check("augment deterministic", open(out, "rb").read() == open(again, "rb").read())

    train, test = os.path.join(tmp, "train.jsonl"), os.path.join(tmp, "test.jsonl")
    r = run("--config", conf, "split", out, "--train", train, "--test", test, "--as-tasks")
    check("split runs", r.returncode == 0, r.stderr)
    tr = [json.loads(l) for l in open(train) if l.strip()]
    te = [json.loads(l) for l in open(test) if l.strip()]
    check("split sizes", len(te) == 10 and len(tr) + len(te) == len(lines))
    ids = {t["task_id"] for t in tr} | {t["task_id"] for t in te}
    check("split partitions", len(ids) == len(lines))
    check("split writes tasks", all("document" in t and "gold" in t for t in te))

    r = run("--config", conf, "split", out, "--train", train, "--test", test, "--holdout", str(len(lines)))
    check("split insufficient examples exits 2", r.returncode == 2 and "InsufficientExamples" in r.stderr, r.stderr)

    r = run("--config", conf, "evaluate", "--tasks", test, "--predictions", os.path.join(tmp, "none.jsonl"))
    check("evaluate with missing predictions exits 2", r.returncode == 2, r.stderr)


def main():
    check("version", run("--version").returncode == 0)
    with tempfile.TemporaryDirectory() as tmp:
        test_score(tmp)
        test_evaluate(tmp)
        test_compare()
        test_simulate()
        test_chunk(tmp)
        test_augment_and_split(tmp)
    if failures:
        print("%d failed" % len(failures))
        sys.exit(1)
    print("all passed")


if __name__ == "__main__":
    main()
