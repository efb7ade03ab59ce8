"""Writes the 50-task golden fixture (tasks.jsonl + predictions.jsonl).

    python3 make_golden_fixture.py <out_dir>
"""

import json
import os
import sys


def s(props):
    return {"type": "object", "properties": props}


def text(instr):
    return {"type": "string", "extraction_instruction": instr}


def num(instr):
    return {"type": "number", "extraction_instruction": instr}


def boolean(instr):
    return {"type": "boolean", "extraction_instruction": instr}


def day(instr):
    return {"type": "string", "format": "date", "extraction_instruction": instr}


def arr(items, instr):
    return {"type": "array", "items": items, "extraction_instruction": instr}


def obj(props, instr):
    return {"type": "object", "properties": props, "extraction_instruction": instr}


def dumps(v):
    return json.dumps(v, ensure_ascii=False)


BASES = [
    {
        "domain": "finance",
        "schema": s({
            "regulators": arr({"type": "string"}, "List every regulator named"),
            "jurisdiction": text("Country whose rules apply"),
            "effective_date": day("Date the rule takes effect"),
            "penalty_cap": num("Maximum fine in millions"),
        }),
        "document": "The Financial Conduct Authority and the Prudential Regulation Authority announced "
                    "joint rules for the United Kingdom, effective 2024-01-15, with fines capped at 12.5 million.",
        "gold": {
            "regulators": ["Financial Conduct Authority", "Prudential Regulation Authority"],
            "jurisdiction": "United Kingdom",
            "effective_date": "2024-01-15",
            "penalty_cap": 12.5,
        },
        "variants": [
            lambda g: dumps(g),
            lambda g: "```json\n" + dumps({**g, "regulators": ["Prudential Regulation Authority",
                                                             "Financial Conduct Authority"]}) + "\n```",
            lambda g: dumps({**g, "regulators": ["Financial Conduct Authority"], "penalty_cap": 15}),
            lambda g: dumps({**g, "effective_date": "January 15, 2025", "jurisdiction": "UK"}),
            lambda g: dumps({k: v for k, v in g.items() if k != "penalty_cap"}),
        ],
    },
    {
        "domain": "science",
        "schema": s({
            "equation": text("The equation as written"),
            "variables": text("Variables defined in the text"),
            "field": text("Scientific field"),
        }),
        "document": "In thermodynamics the ideal gas law PV = nRT relates pressure P, volume V and temperature T.",
        "gold": {
            "equation": ["PV = nRT"],
            "variables": ["P", "V", "T"],
            "field": "thermodynamics",
        },
        "variants": [
            lambda g: dumps(g),
            lambda g: dumps({"equation": "PV = nRT", "variables": ["P", "V", "T", "n"], "field": "Thermodynamics"}),
            lambda g: dumps({"equation": "pV=nRT", "variables": "P, V, T", "field": "physics"}),
            lambda g: "Here is the result: " + dumps(g) + " Let me know if you need more.",
            lambda g: "The equation is PV = nRT.",
        ],
    },
    {
        "domain": "legal",
        "schema": s({
            "parties": arr({"type": "string"}, "Contracting parties"),
            "signed": day("Signature date"),
            "term_years": num("Contract term in years"),
            "renewable": boolean("Whether the contract auto-renews"),
        }),
        "document": "This agreement between Acme Holdings Ltd and John P. Smith was signed on March 3, 2021 "
                    "for a term of 5 years and renews automatically.",
        "gold": {
            "parties": ["Acme Holdings Ltd", "John P. Smith"],
            "signed": "2021-03-03",
            "term_years": 5,
            "renewable": True,
        },
        "variants": [
            lambda g: dumps(g),
            lambda g: dumps({**g, "parties": ["Acme Holdings", "John Smith"], "signed": "March 3, 2021"}),
            lambda g: dumps({**g, "renewable": False, "term_years": 4.5}),
            lambda g: dumps({**g, "renewable": "true", "signed": "2021/3/3"}),
            lambda g: dumps({**g, "term_years": 0, "signed": "2023"}),
        ],
    },
    {
        "domain": "medical",
        "schema": s({
            "patient": obj({
                "name": text("Patient name"),
                "age": num("Age in years"),
            }, "Patient details"),
            "medications": arr({"type": "string"}, "Medications prescribed"),
            "follow_up": day("Follow-up appointment"),
        }),
        "document": "Maria Lopez, 54, was prescribed metformin and lisinopril. Follow-up on Jun 10, 2024.",
        "gold": {
            "patient": {"name": "Maria Lopez", "age": 54},
            "medications": ["metformin", "lisinopril"],
            "follow_up": "2024-06-10",
        },
        "variants": [
            lambda g: dumps(g),
            lambda g: dumps({**g, "patient": {"name": "Maria Lopez"}}),
            lambda g: dumps({**g, "patient": {"name": "M. Lopez", "age": 45},
                             "medications": ["Metformin 500mg", "aspirin", "lisinopril"]}),
            lambda g: dumps({**g, "medications": [], "follow_up": "2024-07-10T09:30"}),
            lambda g: "```\n" + dumps(g)[:-1] + "\n```",
        ],
    },
    {
        "domain": "real_estate",
        "schema": s({
            "address": text("Street address"),
            "price": num("Asking price in USD"),
            "bedrooms": num("Number of bedrooms"),
            "has_garage": boolean("Whether a garage is included"),
            "listed": day("Listing date"),
        }),
        "document": "Listed 2023-09-01: 42 Elm Street, three bedrooms, garage included, asking $450,000.",
        "gold": {
            "address": "42 Elm Street",
            "price": 450000,
            "bedrooms": 3,
            "has_garage": True,
            "listed": "2023-09-01",
        },
        "variants": [
            lambda g: dumps(g),
            lambda g: dumps({**g, "price": 405000, "bedrooms": "3"}),
            lambda g: dumps({**g, "price": "$450,000", "has_garage": None}),
            lambda g: dumps({**g, "address": "42 Elm St.", "listed": "Sept. 1, 2023"}),
            lambda g: dumps([g]),
        ],
    },
    {
        "domain": "news",
        "schema": s({
            "headline": text("Headline"),
            "people": arr({"type": "string"}, "People mentioned"),
            "published": day("Publication date"),
        }),
        "document": "City Council Approves New Park Budget. Mayor Ellen Ortiz and councillor Raj Patel "
                    "spoke on 2022-11-05.",
        "gold": {
            "headline": "City Council Approves New Park Budget",
            "people": ["Ellen Ortiz", "Raj Patel"],
            "published": "2022-11-05",
        },
        "variants": [
            lambda g: dumps(g),
            lambda g: dumps({**g, "people": ["Raj Patel", "Ellen Ortiz", "Ellen Ortiz"]}),
            lambda g: dumps({**g, "headline": "Council approves park budget", "people": ["Mayor Ortiz"]}),
            lambda g: dumps({**g, "published": "November 5, 2021", "people": []}),
            lambda g: dumps({"headline": g["headline"], "people": g["people"]}),
        ],
    },
    {
        "domain": "product",
        "schema": s({
            "product": text("Product name"),
            "specs": obj({
                "weight_kg": num("Weight in kilograms"),
                "color": text("Color"),
                "waterproof": boolean("Waterproof"),
            }, "Specifications"),
            "tags": arr({"type": "string"}, "Keywords"),
        }),
        "document": "The TrailMaster 3000 backpack weighs 1.2 kg, comes in forest green and is waterproof.",
        "gold": {
            "product": "TrailMaster 3000",
            "specs": {"weight_kg": 1.2, "color": "forest green", "waterproof": True},
            "tags": ["backpack", "outdoor", "hiking"],
        },
        "variants": [
            lambda g: dumps(g),
            lambda g: dumps({**g, "specs": {"weight_kg": 1.5, "color": "green", "waterproof": True}}),
            lambda g: dumps({**g, "specs": "1.2 kg, forest green", "tags": ["hiking", "backpack"]}),
            lambda g: dumps({**g, "product": "Trail Master 3000 backpack", "tags": ["camping"]}),
            lambda g: "I could not find the requested information.",
        ],
    },
    {
        "domain": "hr",
        "schema": s({
            "employee": text("Employee name"),
            "title": text("Job title"),
            "salary": num("Annual salary"),
            "start": day("Start date"),
            "remote": boolean("Remote position"),
        }),
        "document": "Offer letter: Priya Natarajan joins as Senior Data Engineer on 2025-02-03 with an annual "
                    "salary of 145000; the role is fully remote.",
        "gold": {
            "employee": "Priya Natarajan",
            "title": "Senior Data Engineer",
            "salary": 145000,
            "start": "2025-02-03",
            "remote": True,
        },
        "variants": [
            lambda g: dumps(g),
            lambda g: dumps({**g, "title": "Data Engineer", "salary": 130500}),
            lambda g: dumps({**g, "start": "2024-02-03", "remote": "yes"}),
            lambda g: dumps({**g, "salary": -145000, "employee": ["Priya Natarajan"]}),
            lambda g: '{"employee": "Priya Natarajan", "title": "Senior Data Engineer"',
        ],
    },
    {
        "domain": "research",
        "schema": s({
            "title": text("Paper title"),
            "authors": arr({"type": "string"}, "Author names"),
            "year": num("Publication year"),
            "datasets": arr(obj({"name": text("Dataset name"), "size": num("Number of examples")}, "Dataset"),
                            "Datasets used"),
        }),
        "document": "Sparse Attention at Scale by Wen Li, Omar Haddad and Grace Kim (2023) evaluates on "
                    "WikiText (103000 examples) and PG-19 (28000 examples).",
        "gold": {
            "title": "Sparse Attention at Scale",
            "authors": ["Wen Li", "Omar Haddad", "Grace Kim"],
            "year": 2023,
            "datasets": [{"name": "WikiText", "size": 103000}, {"name": "PG-19", "size": 28000}],
        },
        "variants": [
            lambda g: dumps(g),
            lambda g: dumps({**g, "datasets": [{"name": "PG-19", "size": 28000}, {"name": "WikiText-103",
                                                                                "size": 100000}]}),
            lambda g: dumps({**g, "authors": ["Li, Wen", "Kim, Grace"], "year": "2023"}),
            lambda g: dumps({**g, "datasets": [{"name": "WikiText"}], "year": 2022}),
            lambda g: dumps({**g, "title": None}),
        ],
    },
    {
        "domain": "logistics",
        "schema": s({
            "shipment_id": text("Shipment identifier"),
            "origin": text("Origin city"),
            "destination": text("Destination city"),
            "weight_tonnes": num("Weight in tonnes"),
            "hazardous": boolean("Hazardous cargo"),
            "eta": day("Estimated arrival"),
        }),
        "document": "Shipment SH-88213 leaves Rotterdam for Singapore carrying 24 tonnes of non-hazardous "
                    "machinery, arriving 2024/12/20.",
        "gold": {
            "shipment_id": "SH-88213",
            "origin": "Rotterdam",
            "destination": "Singapore",
            "weight_tonnes": 24,
            "hazardous": False,
            "eta": "2024-12-20",
        },
        "variants": [
            lambda g: dumps(g),
            lambda g: dumps({**g, "origin": "Singapore", "destination": "Rotterdam"}),
            lambda g: dumps({**g, "weight_tonnes": 24.6, "eta": "Dec 20, 2024", "shipment_id": "SH 88213"}),
            lambda g: dumps({**g, "hazardous": "False", "eta": "2024-12-31"}),
            lambda g: "```json\n" + dumps(g) + "\n```\nNote: weight is approximate.",
        ],
    },
]


def main():
    out_dir = sys.argv[1]
    os.makedirs(out_dir, exist_ok=True)
    tasks, preds = [], []
    for b, base in enumerate(BASES):
        assert len(base["variants"]) == 5
        for v, make in enumerate(base["variants"]):
            task_id = "golden-%02d-%d" % (b, v)
            tasks.append({"task_id": task_id, "schema": base["schema"], "document": base["document"],
                          "gold": base["gold"], "domain": base["domain"]})
            preds.append({"task_id": task_id, "prediction": make(base["gold"])})
    with open(os.path.join(out_dir, "tasks.jsonl"), "w", encoding="utf-8") as f:
        for t in tasks:
            f.write(json.dumps(t, ensure_ascii=False) + "\n")
    with open(os.path.join(out_dir, "predictions.jsonl"), "w", encoding="utf-8") as f:
        for p in preds:
            f.write(json.dumps(p, ensure_ascii=False) + "\n")


if __name__ == "__main__":
    main()
