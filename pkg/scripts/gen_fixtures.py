#!/usr/bin/env python3
"""Regenerate the scenario fixtures shipped in src/aga/fixtures/.

Keeping the fixtures generated keeps the mock-script keys consistent
with the simulator's key scheme (plan echo scripts, decomposition
entries, per-step pipeline scripts).
"""

import json
import os

OUT_DIR = os.path.join(os.path.dirname(__file__), "..", "src", "aga", "fixtures")


def cmd(verb, cls, item_id, agent=0):
    return f"<char{agent}> [{verb}] <{cls}> ({item_id})"


# ---------------------------------------------------------------- town3

def town3():
    rooms = ["km_apartment", "ml_apartment", "ir_apartment", "cafe", "college"]
    item_classes = [
        {"name": r} for r in rooms
    ] + [
        {"name": "bed", "properties": ["LIEABLE"]},
        {"name": "desk", "properties": ["SURFACE"]},
        {"name": "chair", "properties": ["SITTABLE"]},
        {"name": "mug", "properties": ["GRABBABLE"]},
        {"name": "coffee_maker", "properties": ["HAS_SWITCH"], "initial_state": "OFF"},
        {"name": "book", "properties": ["GRABBABLE"]},
        {"name": "bowl", "properties": ["GRABBABLE"]},
        {"name": "guitar", "properties": ["GRABBABLE"]},
        {"name": "counter", "properties": ["SURFACE"]},
    ]
    items = [
        {"id": 1, "class": "km_apartment", "room": "km_apartment"},
        {"id": 2, "class": "ml_apartment", "room": "ml_apartment"},
        {"id": 3, "class": "ir_apartment", "room": "ir_apartment"},
        {"id": 4, "class": "cafe", "room": "cafe"},
        {"id": 5, "class": "college", "room": "college"},
        {"id": 10, "class": "bed", "room": "km_apartment"},
        {"id": 11, "class": "bed", "room": "ml_apartment"},
        {"id": 12, "class": "bed", "room": "ir_apartment"},
        {"id": 13, "class": "desk", "room": "km_apartment"},
        {"id": 14, "class": "desk", "room": "ml_apartment"},
        {"id": 15, "class": "chair", "room": "km_apartment"},
        {"id": 16, "class": "chair", "room": "ml_apartment"},
        {"id": 17, "class": "chair", "room": "ir_apartment"},
        {"id": 18, "class": "chair", "room": "cafe"},
        {"id": 19, "class": "chair", "room": "cafe"},
        {"id": 20, "class": "chair", "room": "college"},
        {"id": 21, "class": "chair", "room": "college"},
        {"id": 22, "class": "mug", "room": "cafe"},
        {"id": 23, "class": "mug", "room": "cafe"},
        {"id": 24, "class": "coffee_maker", "room": "cafe"},
        {"id": 25, "class": "book", "room": "km_apartment"},
        {"id": 26, "class": "book", "room": "ml_apartment"},
        {"id": 27, "class": "bowl", "room": "km_apartment"},
        {"id": 28, "class": "bowl", "room": "ml_apartment"},
        {"id": 29, "class": "bowl", "room": "ir_apartment"},
        {"id": 30, "class": "guitar", "room": "km_apartment"},
        {"id": 31, "class": "counter", "room": "cafe"},
    ]

    # (tick, plan, sub-plans, action strings)
    km_slots = [
        (0, "sleep in bed",
         ["rest through the night"],
         [cmd("lie", "bed", 10)]),
        (14, "have breakfast before heading to college",
         ["go to the kitchen corner", "eat cereal"],
         [cmd("walk", "km_apartment", 1), cmd("grab", "bowl", 27), cmd("putback", "bowl", 27)]),
        (16, "study sociology at the college",
         ["head to the college", "take a seat and study"],
         [cmd("walk", "college", 5), cmd("sit", "chair", 20), cmd("standup", "chair", 20)]),
        (24, "have lunch at Hobbs Cafe",
         ["go to the cafe", "sit down for lunch"],
         [cmd("walk", "cafe", 4), cmd("sit", "chair", 18), cmd("standup", "chair", 18)]),
        (28, "research gentrification at the library",
         ["return to the college", "work at a reading seat"],
         [cmd("walk", "college", 5), cmd("sit", "chair", 20), cmd("standup", "chair", 20)]),
        (36, "write the research paper at home",
         ["go home", "write at the desk"],
         [cmd("walk", "km_apartment", 1), cmd("sit", "chair", 15), cmd("standup", "chair", 15)]),
        (40, "practice guitar in the evening",
         ["pick up the guitar", "play for a while"],
         [cmd("walk", "km_apartment", 1), cmd("grab", "guitar", 30), cmd("putback", "guitar", 30)]),
        (44, "wind down and go to sleep",
         ["get ready for bed", "lie down"],
         [cmd("walk", "km_apartment", 1), cmd("lie", "bed", 10)]),
    ]
    ml_slots = [
        (0, "sleep soundly at home",
         ["rest through the night"],
         [cmd("lie", "bed", 11)]),
        (14, "eat breakfast while reviewing thesis notes",
         ["go to the kitchen corner", "eat while reading notes"],
         [cmd("walk", "ml_apartment", 2), cmd("grab", "bowl", 28), cmd("putback", "bowl", 28)]),
        (16, "work on the physics thesis at home",
         ["sit at the desk", "draft the thesis chapter"],
         [cmd("walk", "ml_apartment", 2), cmd("sit", "chair", 16), cmd("standup", "chair", 16)]),
        (24, "have lunch at Hobbs Cafe", None, None),  # shares Klaus's decomposition
        (28, "read a novel at home",
         ["pick a book", "read on the chair"],
         [cmd("walk", "ml_apartment", 2), cmd("grab", "book", 26), cmd("putback", "book", 26)]),
        (36, "attend an evening lecture at the college",
         ["go to the college", "take a seat in the hall"],
         [cmd("walk", "college", 5), cmd("sit", "chair", 21), cmd("standup", "chair", 21)]),
        (44, "turn in for the night",
         ["get ready for bed", "lie down"],
         [cmd("walk", "ml_apartment", 2), cmd("lie", "bed", 11)]),
    ]
    ir_slots = [
        (0, "sleep until early morning",
         ["rest through the night"],
         [cmd("lie", "bed", 12)]),
        (12, "eat a quick breakfast before opening",
         ["grab a quick bite"],
         [cmd("walk", "ir_apartment", 3), cmd("grab", "bowl", 29), cmd("putback", "bowl", 29)]),
        (14, "open Hobbs Cafe and brew fresh coffee",
         ["go to the cafe", "run the coffee maker"],
         [cmd("walk", "cafe", 4), cmd("switchon", "coffee_maker", 24),
          cmd("switchoff", "coffee_maker", 24)]),
        (24, "serve lunch customers at the cafe",
         ["bring mugs to customers"],
         [cmd("walk", "cafe", 4), cmd("grab", "mug", 22), cmd("putback", "mug", 22)]),
        (30, "tidy the cafe counter",
         ["collect and wash mugs"],
         [cmd("walk", "cafe", 4), cmd("grab", "mug", 23), cmd("putback", "mug", 23)]),
        (36, "plan the Valentine's Day party",
         ["go home", "sketch party ideas"],
         [cmd("walk", "ir_apartment", 3), cmd("sit", "chair", 17), cmd("standup", "chair", 17)]),
        (44, "go to sleep early",
         ["get ready for bed", "lie down"],
         [cmd("walk", "ir_apartment", 3), cmd("lie", "bed", 12)]),
    ]

    agents = [
        {
            "id": "KM", "name": "Klaus Mueller",
            "description": "a 20-year-old sociology student at Oak Hill College.",
            "lifestyle": "studies at the college and has lunch at Hobbs Cafe.",
            "room": "km_apartment",
            "memory": [
                {"text": "Klaus had lunch at Hobbs Cafe", "importance": 5},
                {"text": "Klaus had lunch at Hobbs Cafe with Maria", "importance": 5},
                {"text": "Klaus had lunch at Hobbs Cafe today", "importance": 5},
                {"text": "Klaus dreams of hiking in the mountains", "importance": 7},
            ],
            "schedule": [{"tick": t, "plan": p} for t, p, _, _ in km_slots],
        },
        {
            "id": "ML", "name": "Maria Lopez",
            "description": "a physics student who streams games at night.",
            "lifestyle": "works on her thesis and has lunch at Hobbs Cafe.",
            "room": "ml_apartment",
            "memory": [
                {"text": "Maria studied physics in the library", "importance": 5},
                {"text": "Maria studied physics in the library with friends", "importance": 5},
                {"text": "Maria studied physics in the library all evening", "importance": 5},
                {"text": "Maria wants to learn to paint landscapes", "importance": 7},
            ],
            "schedule": [{"tick": t, "plan": p} for t, p, _, _ in ml_slots],
        },
        {
            "id": "IR", "name": "Isabella Rodriguez",
            "description": "the friendly owner of Hobbs Cafe.",
            "lifestyle": "runs Hobbs Cafe from morning to evening.",
            "room": "ir_apartment",
            "memory": [
                {"text": "Isabella served coffee to the regulars", "importance": 5},
                {"text": "Isabella served coffee to the regulars at noon", "importance": 5},
                {"text": "Isabella served coffee to the regulars this week", "importance": 5},
                {"text": "Isabella hopes to host a Valentine's Day party", "importance": 8},
            ],
            "schedule": [{"tick": t, "plan": p} for t, p, _, _ in ir_slots],
        },
    ]

    scripts = []

    def plan_scripts(agent_id, slots):
        for _, plan, subplans, actions in slots:
            scripts.append({"category": "plan_generation",
                            "key": f"{agent_id}:{plan}", "response": plan})
            if subplans is not None:
                scripts.append({"category": "plan_decomposition",
                                "key": plan, "response": "\n".join(subplans)})
                scripts.append({"category": "plan_decomposition",
                                "key": f"{plan}:actions", "response": "\n".join(actions)})

    plan_scripts("KM", km_slots)
    plan_scripts("ML", ml_slots)
    plan_scripts("IR", ir_slots)

    # mind-wandering variants: a stray thought about the agent's singleton
    # memory event (id 4) redirects the first slot of the day
    wander = [
        ("KM", "sleep in bed",
         "toss and turn while daydreaming about mountain hikes",
         ["imagine the trail", "fall back asleep"],
         [cmd("lie", "bed", 10)]),
        ("ML", "sleep soundly at home",
         "lie awake imagining painting a landscape",
         ["picture the canvas", "fall back asleep"],
         [cmd("lie", "bed", 11)]),
        ("IR", "sleep until early morning",
         "drift off while planning party decorations",
         ["picture the decorations", "fall back asleep"],
         [cmd("lie", "bed", 12)]),
    ]
    for agent_id, plan, variant, subplans, actions in wander:
        scripts.append({"category": "plan_generation",
                        "key": f"{agent_id}:{plan}|w4", "response": variant})
        scripts.append({"category": "plan_decomposition",
                        "key": variant, "response": "\n".join(subplans)})
        scripts.append({"category": "plan_decomposition",
                        "key": f"{variant}:actions", "response": "\n".join(actions)})

    cafe_study = [
        "Hi Maria! How is the thesis going? I was hoping to run into you here.",
        "Hi Klaus! It's going well. I hear your gentrification research is taking shape?",
        "It is! We should compare notes, our topics overlap more than I thought.",
        "Agreed, let's make this a regular study lunch. See you tomorrow! <END>",
    ]
    cafe_serving = [
        "Here is your coffee, Klaus. I'm Isabella, by the way, I run this place.",
        "Thank you Isabella! The coffee is wonderful, I'll be back often. <END>",
    ]
    for i, turn in enumerate(cafe_study):
        scripts.append({"category": "dialogue_turn", "key": f"cafe_study:{i}", "response": turn})
    for i, turn in enumerate(cafe_serving):
        scripts.append({"category": "dialogue_turn", "key": f"cafe_serving:{i}", "response": turn})
    scripts.append({"category": "dialogue_update", "key": "cafe_study",
                    "response": json.dumps({"relationship": "colleague", "feeling": "friendly"})})
    scripts.append({"category": "dialogue_update", "key": "cafe_serving",
                    "response": json.dumps({"relationship": "acquaintance", "feeling": "warm"})})
    scripts.append({"category": "summary_compression", "key": "*",
                    "response": "(condensed summary of shared events)"})
    scripts.append({"category": "dialogue_update", "key": "*",
                    "response": "They know each other from Hobbs Cafe."})
    scripts.append({"category": "reflection", "key": "evening_reflection",
                    "response": "Isabella reflects that the cafe was lively today."})

    return {
        "name": "town3",
        "kind": "town",
        "rooms": rooms,
        "item_classes": item_classes,
        "items": items,
        "agents": agents,
        "encounters": [
            {"tick": 25, "pair": ["KM", "ML"], "key": "cafe_study"},
            {"tick": 26, "pair": ["IR", "KM"], "key": "cafe_serving"},
        ],
        "reflections": [{"tick": 46, "agent": "IR", "key": "evening_reflection"}],
        "scripts": scripts,
    }


# ---------------------------------------------------------- household_day

def household_day():
    rooms = ["bedroom", "kitchen", "livingroom", "bathroom"]
    item_classes = [
        {"name": r} for r in rooms
    ] + [
        {"name": "curtains", "properties": ["CAN_OPEN"], "initial_state": "CLOSED"},
        {"name": "bed", "properties": ["LIEABLE"]},
        {"name": "wardrobe", "properties": ["CAN_OPEN"], "initial_state": "CLOSED"},
        {"name": "lamp", "properties": ["HAS_SWITCH"], "initial_state": "OFF"},
        {"name": "desk", "properties": ["SURFACE"]},
        {"name": "computer", "properties": ["HAS_SWITCH"], "initial_state": "OFF"},
        {"name": "coffee_maker", "properties": ["HAS_SWITCH"], "initial_state": "OFF"},
        {"name": "mug", "properties": ["GRABBABLE"]},
        {"name": "plate", "properties": ["GRABBABLE"]},
        {"name": "fridge", "properties": ["CAN_OPEN", "CONTAINER"], "initial_state": "CLOSED"},
        {"name": "stove", "properties": ["HAS_SWITCH"], "initial_state": "OFF"},
        {"name": "chair", "properties": ["SITTABLE"]},
        {"name": "table", "properties": ["SURFACE"]},
        {"name": "sofa", "properties": ["SITTABLE"]},
        {"name": "tv", "properties": ["HAS_SWITCH"], "initial_state": "OFF"},
        {"name": "book", "properties": ["GRABBABLE"]},
        {"name": "bookshelf", "properties": ["SURFACE"]},
        {"name": "radio", "properties": ["HAS_SWITCH"], "initial_state": "OFF"},
        {"name": "toothbrush", "properties": ["GRABBABLE"]},
        {"name": "sink", "properties": ["CONTAINER"]},
    ]
    items = [
        {"id": 1, "class": "bedroom", "room": "bedroom"},
        {"id": 2, "class": "kitchen", "room": "kitchen"},
        {"id": 3, "class": "livingroom", "room": "livingroom"},
        {"id": 4, "class": "bathroom", "room": "bathroom"},
        {"id": 10, "class": "curtains", "room": "bedroom"},
        {"id": 11, "class": "bed", "room": "bedroom"},
        {"id": 12, "class": "wardrobe", "room": "bedroom"},
        {"id": 13, "class": "lamp", "room": "bedroom"},
        {"id": 14, "class": "desk", "room": "bedroom"},
        {"id": 15, "class": "computer", "room": "bedroom"},
        {"id": 20, "class": "coffee_maker", "room": "kitchen"},
        {"id": 21, "class": "mug", "room": "kitchen"},
        {"id": 22, "class": "mug", "room": "kitchen"},
        {"id": 23, "class": "plate", "room": "kitchen"},
        {"id": 24, "class": "fridge", "room": "kitchen"},
        {"id": 25, "class": "stove", "room": "kitchen"},
        {"id": 26, "class": "chair", "room": "kitchen"},
        {"id": 27, "class": "table", "room": "kitchen"},
        {"id": 30, "class": "sofa", "room": "livingroom"},
        {"id": 31, "class": "tv", "room": "livingroom"},
        {"id": 32, "class": "book", "room": "livingroom"},
        {"id": 33, "class": "bookshelf", "room": "livingroom"},
        {"id": 34, "class": "radio", "room": "livingroom"},
        {"id": 40, "class": "toothbrush", "room": "bathroom"},
        {"id": 41, "class": "sink", "room": "bathroom"},
    ]

    target = "experience a fulfilling day at home"
    activities = [
        "open the curtains to let in the morning light",
        "make a cup of coffee",
        "have breakfast at the kitchen table",
        "read a book on the sofa",
        "watch television",
        "take an afternoon nap",
    ]

    scripts = [{"category": "plan_generation", "key": target,
                "response": "\n".join(activities)}]

    def pipeline(activity, steps, picks=None, retries=None):
        """steps: rough commands in order; critic says yes after the last."""
        for i, rough in enumerate(steps):
            scripts.append({"category": "plan_generation",
                            "key": f"{activity}:{i}", "response": rough})
            verdict = "yes" if i == len(steps) - 1 else "no"
            scripts.append({"category": "critic",
                            "key": f"{activity}:{i + 1}", "response": verdict})
        for (step, pick) in (picks or []):
            scripts.append({"category": "plan_generation",
                            "key": f"{activity}:{step}:pick", "response": str(pick)})
        for (step, attempt, rough) in (retries or []):
            scripts.append({"category": "plan_generation",
                            "key": f"{activity}:{step}~{attempt}", "response": rough})

    pipeline(activities[0], ["open curtains"])
    pipeline(activities[1],
             ["walk kitchen", "grab mug", "switchon coffee_maker",
              "switchoff coffee_maker", "putback mug"],
             picks=[(1, 21), (4, 21)])
    pipeline(activities[2],
             ["open fridge", "grab plate", "close fridge",
              "sit chair", "standup chair", "putback plate"])
    # first proposal grabs the sofa, fails, lands in the forbidden set,
    # and the retry walks to the living room instead
    pipeline(activities[3],
             ["grab sofa", "grab book", "sit sofa", "standup sofa", "putback book"],
             retries=[(0, 1, "walk livingroom"), (0, 2, "walk livingroom"),
                      (0, 3, "walk livingroom"), (0, 4, "walk livingroom")])
    pipeline(activities[4],
             ["switchon tv", "sit sofa", "standup sofa", "switchoff tv"])
    pipeline(activities[5], ["walk bedroom", "lie bed"])

    return {
        "name": "household_day",
        "kind": "household",
        "rooms": rooms,
        "item_classes": item_classes,
        "items": items,
        "agents": [{
            "id": "AL", "name": "Alex Lee",
            "description": "spends a quiet day at home.",
            "lifestyle": "enjoys coffee, books, and television.",
            "room": "bedroom",
        }],
        "target": target,
        "activity_goals": {
            activities[0]: [{"item_id": 10, "state": "OPEN"}],
            activities[4]: [{"item_id": 31, "state": "OFF"}],
        },
        "scripts": scripts,
    }


def main():
    os.makedirs(OUT_DIR, exist_ok=True)
    for build in (town3, household_day):
        data = build()
        path = os.path.join(OUT_DIR, f"{data['name']}.json")
        with open(path, "w", encoding="utf-8") as f:
            json.dump(data, f, indent=1)
            f.write("\n")
        print(f"wrote {os.path.normpath(path)}")


if __name__ == "__main__":
    main()
