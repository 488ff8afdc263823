#!/usr/bin/env python3
"""End-to-end checks of the rebus command line: outputs, files, exit codes."""
import json
import os
import subprocess
import sys
import tempfile

REBUS = sys.argv[1]
failures = []


def rebus(*args, env=None):
    full_env = dict(os.environ, **(env or {}))
    return subprocess.run([REBUS, *args], capture_output=True, text=True, env=full_env)


def expect(name, condition, detail=""):
    if not condition:
        failures.append(f"{name}: {detail}")


with tempfile.TemporaryDirectory() as tmp:
    def write(name, text):
        path = os.path.join(tmp, name)
        with open(path, "w", encoding="utf-8") as f:
            f.write(text)
        return path

    tiny = write("tiny.txt", "The sea, the sea!\n\nBlack and white.\n\nThe black sea.\n"
                             "White sails.\n\nAnd the sails\n\nsea")
    gutenberg = write("g.txt", "Title page\n*** START OF THE BOOK ***\nalpha beta\n\nbeta\n"
                               "*** END OF THE BOOK ***\nlicense words\n")

    r = rebus("stats", write("ab.txt", "a b\n\nb"), "--words")
    expect("stats", r.returncode == 0, r.stderr)
    expect("stats output", r.stdout == "paragraphs\t2\nblocks\t2\nvocabulary\t2\n"
           "# projection_size\twords\n1\t1\n2\t1\n# word\tprojection_size\na\t1\nb\t2\n", r.stdout)

    r = rebus("stats", write("empty.txt", ""))
    expect("stats empty", r.returncode == 0 and "paragraphs\t0\n" in r.stdout
           and "vocabulary\t0\n" in r.stdout, r.stdout)

    r = rebus("stats", gutenberg)
    expect("gutenberg stripped", "vocabulary\t2\n" in r.stdout, r.stdout)
    r = rebus("stats", gutenberg, "--no-strip-gutenberg")
    expect("gutenberg kept", "vocabulary\t2\n" not in r.stdout, r.stdout)

    r = rebus("pe", tiny, "sea", "black")
    expect("pe", r.returncode == 0, r.stderr)
    expect("pe output", "cooccurrence\t1\n" in r.stdout and "base e" in r.stdout, r.stdout)
    r = rebus("pe", tiny, "sea", "--log-base", "2")
    expect("pe single word", "projection_entropy\t0.0\tbase 2\n" in r.stdout, r.stdout)

    r = rebus("pe", tiny, "sea", "whale")
    expect("unknown word exit", r.returncode == 5, r.returncode)
    expect("unknown word listed", "whale" in r.stderr, r.stderr)

    out = os.path.join(tmp, "out")
    r = rebus("run", tiny, "--out", out)
    expect("run default", r.returncode == 0, r.stderr)
    report = json.load(open(os.path.join(out, "report.json")))
    expect("nine ranges", [x["label"] for x in report["ranges"]] ==
           ["10", "11", "12-13", "15-17", "20-25", "30-39", "40-59", "60-149", "150-7020"])
    expect("all empty", all(x["merges"] == 0 and x["status"] == "empty" and
                            x["note"].startswith("empty word set") for x in report["ranges"]))

    out2 = os.path.join(tmp, "out2")
    r = rebus("run", tiny, "--ranges", "1-5,2", "--formats", "json,newick", "--out", out2,
              "--log-base", "10")
    expect("run ranges", r.returncode == 0, r.stderr)
    files = sorted(os.listdir(out2))
    expect("run files", files == ["ea_1-5.json", "ea_1-5.nwk", "ea_2.json", "ea_2.nwk",
                                  "report.json", "words_1-5.tsv", "words_2.tsv"], files)
    report = json.load(open(os.path.join(out2, "report.json")))
    expect("merge counts", [x["merges"] for x in report["ranges"]] ==
           [x["words"] - 1 for x in report["ranges"]], report["ranges"])
    expect("log base recorded", report["log_base"] == "10")

    # Thread count from the flag or the environment must not change any output.
    def outputs(directory):
        result = {}
        for name in sorted(os.listdir(directory)):
            if name != "report.json":
                result[name] = open(os.path.join(directory, name), "rb").read()
        return result
    a, b = os.path.join(tmp, "t1"), os.path.join(tmp, "t4")
    rebus("run", tiny, "--ranges", "1-5", "--out", a, "--threads", "1")
    rebus("run", tiny, "--ranges", "1-5", "--out", b, env={"REBUS_THREADS": "4"})
    expect("threads byte-identical", outputs(a) == outputs(b) and len(outputs(a)) == 5)

    r = rebus("run", tiny, "--ranges", "1-5", "--max-set-size", "2", "--out",
              os.path.join(tmp, "g"))
    expect("guard exit", r.returncode == 0, r.stderr)
    expect("guard warning", "warning: range 1-5" in r.stderr, r.stderr)

    expect("bad range exit", rebus("run", tiny, "--ranges", "5-3").returncode == 2)
    expect("bad range syntax exit", rebus("run", tiny, "--ranges", "x").returncode == 2)
    expect("bad format exit", rebus("run", tiny, "--formats", "png").returncode == 2)
    expect("usage exit", rebus("frobnicate").returncode == 2)
    expect("missing input exit", rebus("stats", os.path.join(tmp, "nope.txt")).returncode == 3)
    expect("bad allocation exit",
           rebus("stats", write("bad.alloc", "a  b\n"), "--allocation").returncode == 3)
    expect("unwritable output exit",
           rebus("run", tiny, "--ranges", "1-5", "--out", tiny).returncode == 4)

for f in failures:
    print("FAIL", f)
print(f"{len(failures)} failures")
sys.exit(1 if failures else 0)
