#!/usr/bin/env python3
"""Regenerate the committed fixture tree under fixtures/.

Covers both demo emails end to end: search + place pages, forecasts,
the annotated eval corpus with baseline predictions, and a synthetic
packing session (frames, manifest, scripted detections).  Deterministic;
safe to re-run.
"""

from __future__ import annotations

import json
from pathlib import Path

from tripminder.frames import Frame, save_pgm
from tripminder.transport import Response, write_fixture

ROOT = Path(__file__).resolve().parents[1] / "fixtures"

NEWPORT_EMAIL = """To,
Drake Wingly,
1722 Lincoln Drive Rose Park,
FL 07662

Dear Student,

We are pleased to invite you to the annual research fair taking place on Nov 30, 2020. The event is hosted at the Oregon Coast Aquarium in Newport. Kindly register before Nov 25, 2020, to secure a place before passes are open to the public by Nov 28, 2020. Entry passes will be issued on arrival.

Don't forget to bring your student ID Card. Note: Newport is quite chill in winter, don't forget to bring jacket.

Regards,
Cecil Dawson
Events Committee
"""

NEWYORK_EMAIL = """Dear Mr. James,

We are happy to inform you that you have been selected for the role of Senior Content Writer in the New York Firm. Congratulations! We look forward to having you join the company on the November 5. Please be there at the office by 10 am. Do bring your ID card and passport. Please respond with an acknowledgement of this offer.

Sincerely,
George Peterson
Manager HR
"""

# name -> (slug, popular mentions, [review texts])
NEWPORT_POIS = {
    "Yaquina Head Outstanding Natural Area": (
        "yaquina-head-outstanding-natural-area",
        ["lighthouse", "tide pools", "whales"],
        [
            "Bring water and a hat, the headland sun is stronger than it looks.",
            "Wear walking shoes for the tide pools!",
            "The lighthouse talk was lovely.",
        ],
    ),
    "Devils Punchbowl State Natural Area": (
        "devils-punchbowl-state-natural-area",
        ["high tide", "churn"],
        [
            "Don't forget to bring a camera, the churn at high tide is unreal.",
            "Parking fills up early on weekends.",
        ],
    ),
    "Oregon Coast Aquarium": (
        "oregon-coast-aquarium",
        ["otters", "seabird aviary"],
        [
            "Buy your ticket online to skip the line.",
            "The otters steal the show.",
        ],
    ),
    "Yaquina Bay Lighthouse": (
        "yaquina-bay-lighthouse",
        ["history", "view"],
        [
            "Take a jacket, the wind off the bay cuts right through.",
            "Short visit but charming.",
        ],
    ),
    "Newport's Historic Bayfront": (
        "newports-historic-bayfront",
        ["sea lions", "chowder"],
        [
            "Carry cash, a few of the little shops don't take cards.",
            "Watch the sea lions argue over the docks.",
        ],
    ),
    "Hatfield Marine Science Center": (
        "hatfield-marine-science-center",
        ["octopus", "touch tank"],
        ["Great for kids on a rainy afternoon."],
    ),
    "Nye Beach": (
        "nye-beach",
        ["sunsets", "galleries"],
        [
            "Pack a sweater; the fog rolls in fast.",
            "Lovely little bookshops nearby.",
        ],
    ),
    "Cape Foulweather": (
        "cape-foulweather",
        ["whale watching", "lookout"],
        ["Bring binoculars for whale watching!"],
    ),
    "Yaquina Bay Bridge": (
        "yaquina-bay-bridge",
        ["architecture", "photos"],
        ["It was stunning at sunset."],
    ),
    "South Beach State Park": (
        "south-beach-state-park",
        ["camping", "dunes"],
        ["Keep some money for the day-use parking."],
    ),
}

NEWYORK_POIS = {
    "The National 9/11 Memorial & Museum": (
        "national-september-11-memorial-museum",
        ["reflecting pools", "survivor tree"],
        ["Keep your ticket handy for the museum entry."],
    ),
    "The Metropolitan Museum of Art": (
        "metropolitan-museum-of-art",
        ["rooftop", "egyptian wing"],
        ["Wear comfortable shoes, the galleries go on for miles."],
    ),
    "Central Park": (
        "central-park",
        ["bow bridge", "the ramble"],
        ["Bring water and sunscreen in summer!"],
    ),
    "Empire State Building": (
        "empire-state-building",
        ["observatory", "night view"],
        ["Buy tickets ahead; sunset slots sell out."],
    ),
    "Top of the Rock": (
        "top-of-the-rock",
        ["skyline", "photos"],
        ["Take a camera, the skyline view is incredible."],
    ),
    "Statue of Liberty": (
        "statue-of-liberty",
        ["crown", "ferry"],
        ["Don't forget to carry your passport sized photo id for the crown."],
    ),
    "Brooklyn Bridge": (
        "brooklyn-bridge",
        ["walkway", "dumbo"],
        ["Hold the rail, bikes come through fast."],
    ),
    "Manhattan Skyline": (
        "manhattan-skyline",
        ["night lights", "ferry ride"],
        ["It was breathtaking at night!"],
    ),
    "The High Line": (
        "the-high-line",
        ["gardens", "vessel view"],
        ["Grab a hat in summer, there's little shade."],
    ),
    "One World Observatory": (
        "one-world-observatory",
        ["elevator", "views"],
        ["The elevator ride alone is worth it."],
    ),
}

NEWPORT_FORECAST = [
    ("2020-11-25", 35.16, 42.6, "Partly cloudy throughout the day.", 17.0),
    ("2020-11-26", 34.79, 42.22, "Partly cloudy throughout the day.", 17.0),
    ("2020-11-27", 34.42, 41.85, "Partly cloudy throughout the day.", 17.0),
]

NEWYORK_FORECAST = [
    ("2020-11-05", 67.18, 78.14, "Clear through the afternoon.", 4.0),
    ("2020-11-06", 63.48, 75.17, "Clear through the afternoon.", 4.0),
    ("2020-11-07", 58.48, 73.62, "Rain starting in the evening.", 85.0),
]

EVAL_ROWS = [
    {
        "text": "wear proper shoes hat water.",
        "ground_truth": ["shoes", "hat", "water"],
    },
    {
        "text": "bring water hat umbrella as it was so so hot",
        "ground_truth": ["water", "hat", "umbrella"],
    },
    {
        "text": "take off your shoes to walk on the uneven floors for a bit they shouldnt complain since the artist makes a big deal about this.",
        "ground_truth": ["shoes"],
    },
    {
        "text": "pick pocket warnings all over the place",
        "ground_truth": [],
    },
    {
        "text": "don't try to take a dip in the water, many have died here.",
        "ground_truth": [],
    },
    {
        "text": "be sure to apply sun screen wear a hat and good shoes not flip flop",
        "ground_truth": ["sun screen", "hat", "shoes"],
    },
]

BASELINE_PREDICTIONS = {
    "lda": [["water"], ["hat"], [], [], [], ["hat"]],
    "tfidf": [["water"], ["water"], [], [], [], []],
    "popular_mentions": [["water"], [], [], [], [], ["shoes"]],
    "qna": [
        ["shoes"],
        ["water", "hat", "umbrella"],
        ["shoes"],
        ["pick pocket"],
        [],
        ["sun screen", "hat"],
    ],
    "spacy_ner": [
        ["shoes", "hat", "water"],
        ["water", "hat", "umbrella"],
        ["shoes"],
        [],
        ["water"],
        ["sun screen", "hat", "shoes", "flip flops"],
    ],
}

# Packing session: 35 frames, constant-gray (blur) at these indices.
BLUR_INDICES = {5, 11, 17, 23, 29}
FRAME_SIDE = 32


def _json_response(payload: dict) -> Response:
    return Response(200, json.dumps(payload, indent=2, sort_keys=True).encode("utf-8"))


def write_emails() -> None:
    emails = ROOT / "emails"
    emails.mkdir(parents=True, exist_ok=True)
    (emails / "newport_invitation.txt").write_text(NEWPORT_EMAIL, "utf-8")
    (emails / "newyork_offer.txt").write_text(NEWYORK_EMAIL, "utf-8")


def write_tripadvisor(city: str, pois: dict, extra_urls: list[str]) -> None:
    base = "https://www.tripadvisor.com/Attraction_Review-"
    urls = [base + slug for slug, _, _ in pois.values()]
    search_key = f"search|things to do in {city} tripadvisor.com"
    # extra non-matching URLs exercise the provider-token filter
    write_fixture(
        ROOT,
        "tripadvisor",
        search_key,
        _json_response({"urls": extra_urls[:1] + urls + extra_urls[1:]}),
    )
    for name, (slug, mentions, reviews) in pois.items():
        url = base + slug
        payload = {
            "name": name,
            "url": url,
            "popular_mentions": mentions,
            "reviews": [
                # descending timestamps so the listed order is newest-first
                {"text": text, "at": f"2020-10-{20 - i:02d}T12:00:00Z"}
                for i, text in enumerate(reviews)
            ],
        }
        write_fixture(ROOT, "tripadvisor", f"poi|{url}", _json_response(payload))


def write_forecasts() -> None:
    for place, window, rows in (
        ("Newport", ("2020-11-25", "2020-12-02"), NEWPORT_FORECAST),
        ("New York", ("2020-11-05", "2020-11-12"), NEWYORK_FORECAST),
    ):
        key = f"forecast|{place}|{window[0]}|{window[1]}"
        days = [
            {
                "date": day,
                "min_temp_f": lo,
                "max_temp_f": hi,
                "summary": summary,
                "rain_chance_pct": rain,
            }
            for day, lo, hi, summary, rain in rows
        ]
        write_fixture(ROOT, "darksky", key, _json_response({"days": days}))


def write_eval() -> None:
    eval_dir = ROOT / "eval"
    eval_dir.mkdir(parents=True, exist_ok=True)
    lines = [json.dumps(row, sort_keys=True) for row in EVAL_ROWS]
    (eval_dir / "qualitative_rows.jsonl").write_text("\n".join(lines) + "\n", "utf-8")
    (eval_dir / "baseline_predictions.json").write_text(
        json.dumps(BASELINE_PREDICTIONS, indent=2, sort_keys=True) + "\n", "utf-8"
    )


def _checkerboard(side: int, index: int) -> Frame:
    gray = bytes(
        255 if (x + y) % 2 == 0 else 0 for y in range(side) for x in range(side)
    )
    return Frame(index=index, width=side, height=side, gray=gray)


def _flat(side: int, index: int, value: int = 128) -> Frame:
    return Frame(index=index, width=side, height=side, gray=bytes([value]) * side * side)


def write_packing() -> None:
    packing = ROOT / "packing"
    frames_dir = packing / "frames"
    frames_dir.mkdir(parents=True, exist_ok=True)

    names = []
    for i in range(35):
        frame = _flat(FRAME_SIDE, i) if i in BLUR_INDICES else _checkerboard(FRAME_SIDE, i)
        name = f"frame_{i:03d}.pgm"
        save_pgm(frames_dir / name, frame)
        names.append(f"frames/{name}")
    (packing / "manifest.txt").write_text("\n".join(names) + "\n", "utf-8")

    # Detections for the 30 sharp frames: two items confirmed via the
    # primary detector, one via quorum on "cap", and a single low-confidence
    # frame that exercises the fallback path.
    sharp = [i for i in range(35) if i not in BLUR_INDICES]
    script: list[tuple[int, str, float]] = []
    for pos, index in enumerate(sharp):
        if pos < 10:
            script.append((index, "jacket", 0.9))
        elif pos < 20:
            script.append((index, "bottle", 0.85))
        elif pos < 28:
            script.append((index, "cap", 0.8))
        elif pos == 28:
            script.append((index, "bottle", 0.5))
        else:
            script.append((index, "bottle", 0.9))
    (packing / "script.json").write_text(
        json.dumps(script, indent=2) + "\n", "utf-8"
    )


def main() -> None:
    write_emails()
    write_tripadvisor(
        "Newport",
        NEWPORT_POIS,
        [
            "https://www.yelp.com/search?find_desc=newport+oregon",
            "https://travel.example.com/newport-guide",
        ],
    )
    write_tripadvisor(
        "New York",
        NEWYORK_POIS,
        [
            "https://www.timeout.com/newyork/things-to-do",
            "https://nycgo.example.org/itineraries",
        ],
    )
    write_forecasts()
    write_eval()
    write_packing()
    print(f"fixtures written under {ROOT}")


if __name__ == "__main__":
    main()
