#!/usr/bin/env python3
"""Regenerate the bundled mini corpus under src/attrimine/data/mini/.

Produces a ~50-comment synthetic dump exercising every catalog category,
a matching sentence-level label file, and a 32-dim toy vector file whose
geometry clusters each category's words around its own near-orthogonal
direction. Deterministic; the committed files are canonical.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from attrimine.corpus import sentence_split, tokenize  # noqa: E402

OUT_DIR = Path(__file__).resolve().parents[1] / "src" / "attrimine" / "data" / "mini"

CATEGORIES = [
    "overpopulation", "urbanization", "pollution", "climate_change",
    "agriculture", "water_withdrawals", "government_inaction", "deforestation",
    "natural_calamities", "damming", "public_water_wastage",
    "industrial_development", "corruption", "lack_of_infrastructure",
    "religion", "lack_of_awareness", "lack_of_harvesting",
    "loss_of_water_bodies", "human_activity", "groundwater_exploitation",
]

# tokens pulled toward each category direction: catalog phrase tokens plus
# the colloquial words the synthetic comments use
DIRECTIONAL_TOKENS = {
    "overpopulation": [
        "overpopulation", "population", "demand", "shift", "people", "babies",
        "crowded", "billion", "growth",
    ],
    "urbanization": [
        "urbanization", "urban", "expansion", "areas", "land", "lands",
        "conversion", "concrete", "buildings", "metro",
    ],
    "pollution": [
        "pollution", "contamination", "wastewater", "waste", "draining",
        "cyanobacteria", "bacteria", "eutrophication", "sewage", "toxic",
        "garbage", "dump", "dirty",
    ],
    "climate_change": [
        "climate", "change", "global", "warming", "weather", "heat", "summer",
        "coastal", "sink",
    ],
    "agriculture": [
        "agricultural", "agriculture", "irrigation", "irrigated", "crops",
        "use", "farmers", "paddy", "fields", "farming",
    ],
    "water_withdrawals": [
        "withdrawals", "pumping", "borewell", "borewells", "pumps",
        "extraction", "motor",
    ],
    "government_inaction": [
        "government", "inaction", "indifference", "policy", "makers",
        "funding", "cuts", "officials", "promises", "apathy", "minister",
    ],
    "deforestation": [
        "deforestation", "nutrient", "soil", "trees", "forest", "cut",
        "logging", "plant",
    ],
    "natural_calamities": [
        "drought", "flood", "topographical", "disadvantage", "monsoon",
        "famine", "cyclone", "nature",
    ],
    "damming": [
        "damming", "impoundment", "dam", "dams", "upstream", "reservoir",
        "reservoirs", "silt", "barrage",
    ],
    "public_water_wastage": [
        "public", "wastage", "usage", "taps", "overflow", "running",
        "wasting", "tanks",
    ],
    "industrial_development": [
        "industrial", "development", "petroleum", "industry", "industries",
        "oil", "sands", "factories", "factory", "refinery", "refineries",
    ],
    "corruption": [
        "corruption", "mismanagement", "corrupt", "bribes", "bribe", "scams",
        "scam", "politicians",
    ],
    "lack_of_infrastructure": [
        "infrastructure", "distribution", "system", "pipes", "pipeline",
        "pipelines", "network", "tanker", "tankers", "broken", "leaks",
        "supply",
    ],
    "religion": [
        "religion", "religious", "hindu", "caste", "islam", "temple",
        "festival", "communal",
    ],
    "lack_of_awareness": [
        "awareness", "study", "aware", "unaware", "ignorance", "education",
    ],
    "lack_of_harvesting": [
        "rainwater", "harvesting", "preservation", "rooftop", "rain",
        "storing",
    ],
    "loss_of_water_bodies": [
        "loss", "bodies", "tables", "permanent", "removal", "cycle", "lakes",
        "ponds", "wetlands", "encroached", "waterbodies",
    ],
    "human_activity": [
        "human", "activity", "protein", "rich", "diet", "consumption",
        "livestock", "meat", "lifestyle",
    ],
    "groundwater_exploitation": [
        "groundwater", "exploitation", "strain", "natural", "resources",
        "depletion", "ground", "aquifer", "digging", "deeper", "wells",
    ],
}

TOPIC_TOKENS = [
    "water", "crisis", "shortage", "scarcity", "drink", "drinks", "drop",
    "save", "saving", "river", "rivers", "thirsty", "dry",
]

OFFTOPIC_A = ["cricket", "match", "wicket", "batsman", "bowler", "team", "season"]
OFFTOPIC_B = ["movie", "song", "actor", "trailer", "bollywood", "remakes", "channel"]

NOISE_TOKENS = [
    "city", "cities", "excessive", "irresponsible", "intensive", "inefficient",
    "lack", "house", "home", "everywhere", "everyone", "everything", "daily",
    "day", "night", "years", "year", "real", "reason", "problem", "limit",
    "limits", "necessary", "steps", "space", "open", "plots", "angle", "money",
    "think", "know", "matters", "act", "wonder", "friends", "grandmother",
    "hours", "walks", "kills", "killing", "fight", "angry", "severe",
    "extreme", "unreal", "amounts", "scheme", "projects", "planning",
    "unchecked", "culprit", "vanished", "filled", "empty", "gone", "politics",
    "decide", "teaches", "kids", "simply", "stuck", "head", "love", "town",
]

# one tuple per labeled comment: (comment id suffix used for ordering is
# implicit), each sentence is (text-without-terminator, labels)
LABELED_COMMENTS: list[list[tuple[str, list[str]]]] = [
    [("this is a population problem", ["overpopulation"]),
     ("too many people and not enough water", ["overpopulation"])],
    [("stop having so many babies", ["overpopulation"]),
     ("overpopulation is killing our water supply", ["overpopulation"])],
    [("the city is all concrete now", ["urbanization"]),
     ("urban expansion ate every open space", ["urbanization"])],
    [("too many buildings coming up, urbanization with no planning", ["urbanization"])],
    [("the river is full of sewage and toxic garbage", ["pollution"])],
    [("pollution everywhere", ["pollution"]),
     ("industries dump their waste into the river", ["pollution"])],
    [("coastal cities will sink due to global warming while we fight for water", ["climate_change"])],
    [("the heat is extreme this summer", ["climate_change"]),
     ("climate change is here", ["climate_change"])],
    [("farmers use flood irrigation for paddy and it drinks all the water", ["agriculture"])],
    [("water intensive crops everywhere", ["agriculture"]),
     ("inefficient irrigation is the real culprit", ["agriculture"])],
    [("every house has a borewell pumping water day and night", ["water_withdrawals"])],
    [("unchecked extraction from borewells, the pumps never stop", ["water_withdrawals"])],
    [("the government is not taking necessary steps", ["government_inaction"]),
     ("officials keep making promises", ["government_inaction"])],
    [("no funding for water projects", ["government_inaction"]),
     ("policy makers just dont care", ["government_inaction"])],
    [("plant trees", ["deforestation"]),
     ("you cut every forest and now nothing holds the water", ["deforestation"])],
    [("we cut trees to build flat malls and multi storey buildings", ["deforestation"])],
    [("no monsoon for two years and the drought is severe", ["natural_calamities"])],
    [("first a flood then famine", ["natural_calamities"]),
     ("nature is angry", ["NONE"])],
    [("they built a dam upstream and our river went dry", ["damming"])],
    [("damming every river kills the flow", ["damming"]),
     ("reservoirs silt up", ["damming"])],
    [("people leave taps running and tanks overflow daily", ["public_water_wastage"])],
    [("so much wastage in every home", ["public_water_wastage"]),
     ("people just let the taps run", ["public_water_wastage"])],
    [("factories and refineries drink more water than the whole city", ["industrial_development"])],
    [("industrial development without limits", ["industrial_development"]),
     ("every factory gets water first", ["industrial_development"])],
    [("corrupt politicians take bribes and the money disappears", ["corruption"])],
    [("pure mismanagement and scams in every water scheme", ["corruption"])],
    [("half the water leaks from broken pipes before it reaches us", ["lack_of_infrastructure"])],
    [("no pipeline network in new areas, tankers are the only supply", ["lack_of_infrastructure"])],
    [("religion and caste politics decide who gets water here", ["religion"])],
    [("every festival uses so much water in the name of religion", ["religion"])],
    [("nobody teaches kids about saving water, pure ignorance", ["lack_of_awareness"])],
    [("people are simply unaware", ["lack_of_awareness"]),
     ("no education about water at all", ["lack_of_awareness"])],
    [("not one house does rainwater harvesting here", ["lack_of_harvesting"])],
    [("we let the rooftop rain just drain away, no storing anything", ["lack_of_harvesting"])],
    [("all the lakes and ponds are encroached and gone", ["loss_of_water_bodies"])],
    [("wetlands filled up for plots", ["loss_of_water_bodies"]),
     ("the waterbodies vanished", ["loss_of_water_bodies"])],
    [("our meat heavy diet consumes unreal amounts of water", ["human_activity"])],
    [("livestock consumption takes more water than people think", ["human_activity"])],
    [("the aquifer is empty and everyone keeps digging deeper", ["groundwater_exploitation"])],
    [("groundwater exploitation has no limit here, depletion everywhere", ["groundwater_exploitation"])],
    [("population growth plus trees getting cut everywhere", ["overpopulation", "deforestation"]),
     ("no wonder there is no water", ["NONE"])],
]

UNLABELED_COMMENTS = [
    "save water friends. every drop matters",
    "this crisis will reach your city too! act now",
    "my grandmother walks two hours for one pot of water",
    "the thirsty summer is coming again",
]

OFFTOPIC_COMMENTS = [
    "great match yesterday! what a wicket",
    "the batsman played so well. best team this season",
    "new trailer looks amazing, cant wait for the movie",
    "that song is stuck in my head. what an actor",
    "bollywood remakes are getting worse every year",
    "anyone here after the cricket final?",
    "first comment! love from my town",
    "subscribe to my channel please",
]

TERMINATORS = [".", "!", "?"]


def build_vectors(dim: int = 32, seed: int = 20240601) -> dict[str, np.ndarray]:
    rng = np.random.default_rng(seed)
    # near-orthogonal unit directions via modified Gram-Schmidt; avoids any
    # dependence on LAPACK sign conventions
    raw = rng.standard_normal((len(CATEGORIES) + 3, dim))
    directions = []
    for row in raw:
        v = row.copy()
        for d in directions:
            v -= (v @ d) * d
        directions.append(v / np.linalg.norm(v))
    by_category = dict(zip(CATEGORIES, directions))
    topic_dir, off_a, off_b = directions[len(CATEGORIES):]

    vectors: dict[str, np.ndarray] = {}

    def place(tokens, direction, spread):
        for token in tokens:
            if token in vectors:
                raise ValueError(f"token {token!r} assigned twice")
            vectors[token] = direction + spread * rng.standard_normal(dim)

    for category in CATEGORIES:
        place(DIRECTIONAL_TOKENS[category], by_category[category], 0.12)
    place(TOPIC_TOKENS, topic_dir, 0.12)
    place(OFFTOPIC_A, off_a, 0.12)
    place(OFFTOPIC_B, off_b, 0.12)
    place(NOISE_TOKENS, np.zeros(dim), 0.15)
    return vectors


def main() -> None:
    OUT_DIR.mkdir(parents=True, exist_ok=True)

    comments = []
    labels: list[tuple[str, int, str]] = []
    counter = 0

    def next_id() -> str:
        nonlocal counter
        counter += 1
        return f"c{counter:02d}"

    for sentences in LABELED_COMMENTS:
        cid = next_id()
        parts = []
        for i, (text, cats) in enumerate(sentences):
            parts.append(text + TERMINATORS[(counter + i) % len(TERMINATORS)])
            for cat in cats:
                labels.append((cid, i, cat))
        comments.append({"id": cid, "text": " ".join(parts)})
    for text in UNLABELED_COMMENTS:
        comments.append({"id": next_id(), "text": text})
    for text in OFFTOPIC_COMMENTS:
        cid = next_id()
        comments.append({"id": cid, "text": text})
        for i in range(len(sentence_split(text))):
            labels.append((cid, i, "NONE"))

    for i, record in enumerate(comments):
        record["video_id"] = f"v{i % 5 + 1}"
        record["author_id"] = f"a{i + 1:02d}"

    # sanity: the stored label sentence indices must exist after splitting
    for cid, index, _ in labels:
        text = next(r["text"] for r in comments if r["id"] == cid)
        assert index < len(sentence_split(text)), (cid, index)

    with open(OUT_DIR / "comments.jsonl", "w", encoding="utf-8") as handle:
        for record in comments:
            handle.write(json.dumps(record, sort_keys=True) + "\n")

    with open(OUT_DIR / "labels.tsv", "w", encoding="utf-8") as handle:
        handle.write("# sentence-level annotations for the bundled mini corpus\n")
        handle.write("# comment_id<TAB>sentence_index<TAB>category_id|NONE\n")
        for cid, index, cat in labels:
            handle.write(f"{cid}\t{index}\t{cat}\n")

    vectors = build_vectors()
    corpus_tokens = {t for r in comments for t in tokenize(r["text"])}
    coverage = sum(t in vectors for t in corpus_tokens) / len(corpus_tokens)
    with open(OUT_DIR / "vectors.txt", "w", encoding="utf-8") as handle:
        for token in sorted(vectors):
            handle.write(token + " " + " ".join(f"{x:.6f}" for x in vectors[token]) + "\n")

    print(f"wrote {len(comments)} comments, {len(labels)} label rows, "
          f"{len(vectors)} vectors to {OUT_DIR}")
    print(f"corpus token coverage: {coverage:.2%}")


if __name__ == "__main__":
    main()
