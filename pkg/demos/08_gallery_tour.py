"""Run every gallery entry's attached expectations and print the table."""
from mmslab.gallery import build, gallery_names

for name in gallery_names():
    entry = build(name)
    rows = entry.verify()
    flag = "ok " if all(r["passed"] for r in rows) else "FAIL"
    print(f"[{flag}] {entry.name}")
    for r in rows:
        print(f"      {r['expectation']:34s} -> {r['passed']} ({r['operation']})")
