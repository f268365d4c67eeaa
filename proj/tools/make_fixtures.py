#!/usr/bin/env python3
"""Regenerates the application fixtures under data/.

Rows printed in the case-study extracts are copied verbatim. Everything else
the extracts leave out (basic attributes of most students, the rest of the Law
cohort) is filled in deterministically and marked with a '# synthetic' line.
"""
import json
import random
from pathlib import Path

HEADER = ("student_id,mention,level,age,employed,bacc_year,nationality,"
          "enrolled,passed_exam,cp,op,ltp,ec,dd_km")
DATA = Path(__file__).resolve().parent.parent / "data"

# student, CP, DD, EC, LTP, OP
CS_SOCIAL = [
    ("L1MIA16", 5, 100, 4, 0, 5), ("L1MIA05", 5, 102, 2, 0, 5),
    ("L1MIA06", 5, 100, 3, 0, 0), ("L1MIA07", 5, 100, 5, 0, 5),
    ("L1MIA08", 5, 100, 4, 0, 5), ("L1MIA11", 5, 100, 2, 0, 0),
    ("L1MIA12", 5, 100, 1, 0, 0), ("L1MIA13", 5, 923, 1, 0, 10),
    ("L1MIA15", 5, 100, 3, 0, 0), ("L1MIA18", 5, 100, 2, 0, 0),
    ("L1MIA21", 5, 100, 4, 0, 0), ("L1MIA22", 5, 100, 1, 0, 5),
    ("L1MIA23", 5, 350, 2, 0, 10), ("L1MIA24", 5, 100, 6, 0, 0),
    ("L1MIA25", 5, 100, 5, 0, 0), ("L1MIA26", 5, 100, 2, 0, 0),
    ("L1MIA27", 5, 102, 1, 0, 0), ("L1MIA28", 5, 100, 4, 0, 5),
    ("L1MIA29", 5, 100, 5, 0, 5), ("L1MIA30", 5, 399, 1, 0, 0),
    ("L1MIA31", 5, 100, 3, 0, 10), ("L1MIA32", 5, 923, 4, 5, 5),
    ("L1MIA34", 5, 399, 2, 0, 10), ("L1MIA35", 5, 100, 2, 0, 0),
    ("L1MIA02", 5, 100, 5, 0, 5), ("L1MIA04", 5, 100, 6, 0, 0),
]
CS_PRINTED_AGES = {"L1MIA16": 18, "L1MIA05": 20, "L1MIA06": 16, "L1MIA07": 22,
                   "L1MIA08": 20, "L1MIA11": 18, "L1MIA12": 19, "L1MIA13": 18}

# student, age, employed, bacc, nationality, enrolled, passed; first four printed
CS_REJECTED = [
    ("L1MIA10", 18, False, 2017, "Malagasy", False, True),
    ("L1MIA17", 23, False, 2016, "Malagasy", False, True),
    ("L1MIA20", 18, False, 2017, "Malagasy", False, True),
    ("L1MIA33", 18, False, 2017, "Malagasy", False, False),
    ("L1MIA01", 25, False, 2017, "Malagasy", True, True),
    ("L1MIA03", 19, True, 2017, "Malagasy", True, True),
    ("L1MIA09", 19, False, 2017, "Comorian", True, True),
    ("L1MIA14", 20, False, 2015, "Malagasy", True, True),
    ("L1MIA19", 18, False, 2017, "Malagasy", True, False),
]

LAW_PRINTED_AGES = {1: 20, 2: 18, 3: 19, 4: 19, 5: 21, 6: 18, 7: 18, 8: 16}
LAW_PRINTED_REJECTED = {11: 19, 13: 18, 18: 23, 23: 19}  # enrolled, failed the exam
LAW_SYNTHETIC_REJECTED = [27, 31, 36, 41, 46, 52, 57, 61, 66, 70, 74, 79, 83, 88, 92, 95, 97, 99, 101]


def b(v):
    return "true" if v else "false"


def row(sid, mention, age, employed, bacc, nat, enrolled, passed, cp, dd, ec, ltp, op):
    return (f"{sid},{mention},L1,{age},{b(employed)},{bacc},{nat},{b(enrolled)},{b(passed)},"
            f"{cp},{op},{ltp},{ec},{dd}")


def computer_science(admitted_only):
    mention = "Computer science"
    lines = [HEADER, "# printed social values; ages of the first eight as printed"]
    printed = [r for r in CS_SOCIAL if r[0] in CS_PRINTED_AGES]
    rest = [r for r in CS_SOCIAL if r[0] not in CS_PRINTED_AGES]
    for sid, cp, dd, ec, ltp, op in printed:
        lines.append(row(sid, mention, CS_PRINTED_AGES[sid], False, 2017, "Malagasy", True, True,
                         cp, dd, ec, ltp, op))
    lines.append("# synthetic basic attributes, printed social values")
    for k, (sid, cp, dd, ec, ltp, op) in enumerate(rest):
        lines.append(row(sid, mention, 17 + k % 5, False, 2017, "Malagasy", True, True,
                         cp, dd, ec, ltp, op))
    if admitted_only:
        return lines
    rng = random.Random(35)
    for k, (sid, age, emp, bacc, nat, enr, passed) in enumerate(CS_REJECTED):
        if k == 0:
            lines.append("# printed basic attributes, synthetic social values")
        if k == 4:
            lines.append("# synthetic")
        lines.append(row(sid, mention, age, emp, bacc, nat, enr, passed, 5,
                         rng.choice([100, 102, 350]), rng.randint(0, 7), 0, rng.choice([0, 5, 10])))
    return lines


def law():
    mention = "Law"
    rng = random.Random(101)
    failures = ["age", "bacc", "enrolled", "passed", "employed", "nationality"]
    lines = [HEADER]
    for i in range(1, 102):
        sid = f"L1DRO{i:02d}"
        social = (rng.choice([5, 5, 5, 10]), rng.randint(5, 1467), rng.randint(0, 7),
                  rng.choice([0, 0, 0, 5]), rng.choice([0, 0, 5, 10]))
        age, emp, bacc, nat, enr, passed = 16 + rng.randint(0, 6), False, 2017, "Malagasy", True, True
        if i in LAW_PRINTED_AGES:
            age = LAW_PRINTED_AGES[i]
            lines.append("# printed basic attributes, synthetic social values")
        elif i in LAW_PRINTED_REJECTED:
            age, passed = LAW_PRINTED_REJECTED[i], False
            lines.append("# printed basic attributes, synthetic social values")
        else:
            lines.append("# synthetic")
            if i in LAW_SYNTHETIC_REJECTED:
                kind = failures[LAW_SYNTHETIC_REJECTED.index(i) % len(failures)]
                if kind == "age":
                    age = 24
                elif kind == "bacc":
                    bacc = 2014
                elif kind == "enrolled":
                    enr = False
                elif kind == "passed":
                    passed = False
                elif kind == "employed":
                    emp = True
                else:
                    nat = "French"
        cp, dd, ec, ltp, op = social
        lines.append(row(sid, mention, age, emp, bacc, nat, enr, passed, cp, dd, ec, ltp, op))
    return lines


def main():
    DATA.mkdir(exist_ok=True)
    (DATA / "cs_l1_applications.csv").write_text("\n".join(computer_science(False)) + "\n")
    (DATA / "cs_l1_admitted.csv").write_text("\n".join(computer_science(True)) + "\n")
    (DATA / "law_l1_applications.csv").write_text("\n".join(law()) + "\n")
    judgments = {"criteria": ["CP", "DD", "EC", "LTP", "OP"],
                 "upper": [[3, 4, 4, 3], [2, 2, 1], [1, "1/2"], ["1/2"]]}
    (DATA / "judgments.json").write_text(json.dumps(judgments, indent=2) + "\n")


if __name__ == "__main__":
    main()
