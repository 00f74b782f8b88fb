#!/usr/bin/env python3
"""Regenerates the bundled scenario files.

Arrival ticks are drawn uniformly from per-message windows with a fixed seed,
so the files are reproducible. Run from any directory:

    python3 scenarios/generate.py
"""

import json
import random
from pathlib import Path

HERE = Path(__file__).resolve().parent
WEEK_TICKS = 7 * 24 * 3600 * 2  # at 0.5 s per tick

PRIVATE_EMAILS = [
    ("lloyds", "Lloyds bank", "", "Hi [user], You still have not paid back your debt and "
     "you have only 500 pounds at your account. Therefore your credit card will be blocked."),
    ("boss", "Your Boss", "boss", "Hi [user], I'm very much unhappy with your performance and "
     "hence decided to put you on performance improvement plan. You have 6 months to prove "
     "your value, otherwise you will be terminated. Let's have a chat about it later today."),
    ("water", "Thames Water", "", "Hi [user], please give us meter readings by end next week"),
    ("pedro", "Pedro", "friends", "Hey [user], pub at 6?"),
    ("jeniffer1", "Jeniffer", "friends", "Hey [user], dinner at my place at 7?"),
    ("jeniffer2", "Jeniffer", "friends",
     "Stop stalking me!!!!! Next time I'm gonna call police you bastard!!!"),
]

PRIVATE_REMINDERS = [
    ("anna", "[user], I'm supposed to remind you a date with Anna tonight.", {"event_start": "19:00"}),
    ("intern", "[user], I'm supposed to remind you to fire an intern next week.", None),
]

DURATIONS = {"greeting": 4, "weather": 12, "iot": 4, "calendar": 10, "email": 16,
             "news": 12, "traffic": 10, "reactive": 8}

NOISE = {"detection_prob": 0.95, "false_positive_rate": 0.05, "position_sigma": 0.05,
         "embedding_sigma": 0.02, "bearing_sigma": 0.03, "detection_score": 0.9}


def arrival(rng, window):
    return rng.randint(window[0], window[1])


def email(rng, ident, sender, group, body, window, **extra):
    e = {"id": ident, "kind": "email", "tick": arrival(rng, window), "sender": sender,
         "subject": "", "body": body}
    if group:
        e["sender_group"] = group
    e.update(extra)
    return e


def reminder(rng, ident, body, window, start, private):
    e = {"id": ident, "kind": "calendar", "tick": 0, "body": body, "private": private}
    e["tick"] = arrival(rng, window)
    if start is None:
        e["event_start_tick"] = e["tick"] + WEEK_TICKS
    else:
        e.update(start)
    return e


def speech(intervals, speakers, every=20):
    events = []
    for start, end in intervals:
        for i, tick in enumerate(range(start + 5, end, every)):
            events.append({"tick": tick, "label": "speech", "posterior": 0.9,
                           "speaker": speakers[i % len(speakers)]})
    return events


def persons(duration, leave, activities):
    return [
        {"id": "p1", "name": "Alex", "enrolled": True, "embedding_seed": 11,
         "entry_tick": 0, "exit_tick": duration,
         "waypoints": [{"tick": 0, "x": 1.2, "y": 1.2},
                       {"tick": leave + 100, "x": 1.2, "y": 1.2},
                       {"tick": leave + 160, "x": 1.6, "y": -0.4}],
         "activities": activities},
        {"id": "p2", "name": "Sam", "enrolled": False, "embedding_seed": 22,
         "entry_tick": 0, "exit_tick": leave,
         "waypoints": [{"tick": 0, "x": -1.0, "y": 1.5}]},
    ]


def base(name, condition, duration, start_clock, seed, leave, activities):
    return {
        "schema_version": 1, "name": name, "condition": condition,
        "duration_ticks": duration, "tick_seconds": 0.5, "start_clock": start_clock,
        "day_starts": [], "seed": seed, "device": {"x": 0.0, "y": 0.0, "heading": 0.0},
        "user": "p1",
        "whitelist": ["family", "boss", "friends"],
        "news_keywords": ["terrorist", "politics"],
        "weather_report": "Today will be mostly sunny with a high of 18 degrees.",
        "persons": persons(duration, leave, activities),
        "stationary_objects": [{"label": "sofa", "x": 1.4, "y": 1.0},
                               {"label": "tv", "x": -2.5, "y": 0.0},
                               {"label": "door", "x": 0.0, "y": -3.0}],
        "noise": NOISE, "durations": DURATIONS,
    }


def condition1():
    rng = random.Random(101)
    duration, leave = 2400, 1200
    conversing = [(100, 500)]
    s = base("condition1-morning", "condition1", duration, "08:30", 101, leave,
             [{"start": 100, "end": 500, "engagement": "conversing"},
              {"start": 600, "end": 1200, "engagement": "task"}])
    backlog = (20, 1100)
    services = [email(rng, "c1-" + i, snd, grp, body, backlog, private=True)
                for i, snd, grp, body in PRIVATE_EMAILS]
    services += [reminder(rng, "c1-" + i, body, backlog, start, True)
                 for i, body, start in PRIVATE_REMINDERS]
    services += [
        reminder(rng, "c1-dentist", "Reminder: dentist appointment at 10:00.", backlog,
                 {"event_start": "10:00"}, False),
        reminder(rng, "c1-standup", "Reminder: team call at 15:00.", backlog,
                 {"event_start": "15:00"}, False),
        {"id": "c1-news", "kind": "news", "tick": arrival(rng, backlog),
         "headline": "Parliament votes on the new budget today.", "tags": ["politics"]},
        {"id": "c1-traffic", "kind": "traffic", "tick": arrival(rng, backlog),
         "text": "Traffic on the A14 is light this morning."},
    ]
    s["services"] = sorted(services, key=lambda e: e["tick"])
    s["acoustic_events"] = speech(conversing, ["p1", "p2"]) + [
        {"tick": 1700, "label": "speech", "posterior": 0.9, "speaker": "p1"},
        {"tick": 350, "label": "door", "posterior": 0.8, "bearing": 4.71238898038469},
    ]
    s["acoustic_events"].sort(key=lambda e: e["tick"])
    s["voice_triggers"] = [{"tick": 1700, "text": "It is twenty past nine."}]
    return s


def condition2():
    rng = random.Random(202)
    duration, leave = 4800, 2400
    conversing = [(300, 900), (1500, 2100)]
    s = base("condition2-afternoon", "condition2", duration, "14:00", 202, leave,
             [{"start": 300, "end": 900, "engagement": "conversing"},
              {"start": 1500, "end": 2100, "engagement": "conversing"},
              {"start": 3000, "end": 4200, "engagement": "task"}])
    together = (100, 2300)
    services = [email(rng, "c2-" + i, snd, grp, body, together, private=True)
                for i, snd, grp, body in PRIVATE_EMAILS]
    # Newsletters land while the two participants are talking.
    chatter = (1520, 2000)
    for i, (snd, body) in enumerate([
            ("Tech Weekly", "This week: ten gadgets for your kitchen."),
            ("Garden News", "Spring planting guide inside."),
            ("Cinema Club", "New releases this weekend."),
            ("Book Digest", "Our picks for summer reading.")]):
        services.append(email(rng, f"c2-newsletter{i}", snd, "", body, chatter, newsletter=True))
    later = (2500, 4400)
    services += [
        email(rng, "c2-spam0", "Prize Centre", "", "You have won a cruise!", later, spam=True),
        email(rng, "c2-spam1", "Pharma Deals", "", "Cheap pills, limited offer.", later, spam=True),
        email(rng, "c2-order", "Online Shop", "", "Your order has been dispatched.", later),
        email(rng, "c2-gym", "City Gym", "", "Your membership renews next month.", later),
        email(rng, "c2-mum", "Mum", "family", "Call me when you can, love.", later),
        email(rng, "c2-dad", "Dad", "family", "Match starts at 5, come over?", later),
    ]
    services += [reminder(rng, "c2-" + i, body, together, start, True)
                 for i, body, start in PRIVATE_REMINDERS]
    services += [
        reminder(rng, "c2-yoga", "Reminder: yoga class at 15:30.", (100, 600),
                 {"event_start": "15:30"}, False),
        reminder(rng, "c2-parcel", "Reminder: pick up the parcel before 17:00.", (2500, 3500),
                 {"event_start": "17:00"}, False),
        reminder(rng, "c2-bookclub", "Reminder: book club at 20:00.", later,
                 {"event_start": "20:00"}, False),
        {"id": "c2-parents", "kind": "calendar", "tick": arrival(rng, later),
         "body": "Reminder: lunch with your parents tomorrow.",
         "event_start_tick": duration + 48000},
        {"id": "c2-news0", "kind": "news", "tick": arrival(rng, together),
         "headline": "Politics: ministers meet to discuss the housing plan.", "tags": ["politics"]},
        {"id": "c2-news1", "kind": "news", "tick": arrival(rng, later),
         "headline": "Local team wins the regional cup.", "tags": ["sport"]},
        {"id": "c2-weather", "kind": "weather", "tick": arrival(rng, later),
         "text": "Rain is expected after 17:00."},
        {"id": "c2-traffic", "kind": "traffic", "tick": arrival(rng, later),
         "text": "Roadworks on the ring road are causing delays."},
    ]
    s["services"] = sorted(services, key=lambda e: e["tick"])
    s["acoustic_events"] = speech(conversing, ["p1", "p2"]) + [
        {"tick": 3600, "label": "speech", "posterior": 0.9, "speaker": "p1"},
        {"tick": 2350, "label": "door", "posterior": 0.8, "bearing": 4.71238898038469},
    ]
    s["acoustic_events"].sort(key=lambda e: e["tick"])
    s["voice_triggers"] = [{"tick": 3600, "text": "It is a quarter to four."}]
    return s


def empty():
    return {"schema_version": 1, "name": "empty", "duration_ticks": 0}


def main():
    for name, doc in (("condition1", condition1()), ("condition2", condition2()),
                      ("empty", empty())):
        (HERE / f"{name}.json").write_text(json.dumps(doc, indent=2) + "\n")


if __name__ == "__main__":
    main()
