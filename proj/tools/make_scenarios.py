#!/usr/bin/env python3
"""Regenerates the bundled scenario files in scenarios/.

The case-study scenarios are synthetic reconstructions of textbook urban
conflicts (cyclist following, unprotected left turn, right-turn merge,
straight crossing with a left turner) plus two sanity scenarios.
"""

import json
import math
import pathlib

OUT = pathlib.Path(__file__).resolve().parent.parent / "scenarios"


def straight(x0, y0, heading, length, step=1.0):
    n = int(round(length / step))
    return [[x0 + i * step * math.cos(heading), y0 + i * step * math.sin(heading)] for i in range(n + 1)]


def arc(cx, cy, radius, a0, a1, step=1.0):
    n = max(2, int(math.ceil(abs(a1 - a0) * radius / step)))
    return [[cx + radius * math.cos(a0 + (a1 - a0) * i / n),
             cy + radius * math.sin(a0 + (a1 - a0) * i / n)] for i in range(n + 1)]


def join(*parts):
    pts = []
    for part in parts:
        for p in part:
            if pts and math.dist(pts[-1], p) < 1e-9:
                continue
            pts.append([round(p[0], 6), round(p[1], 6)])
    return pts


def write(name, doc):
    OUT.mkdir(exist_ok=True)
    with open(OUT / f"{name}.json", "w") as f:
        json.dump(doc, f, indent=2)
        f.write("\n")


def cyclist_following():
    write("cyclist_following", {
        "name": "cyclist_following",
        "description": "Synthetic reconstruction: ego catches up with a cyclist riding near "
                       "the right edge of a narrow two-way road.",
        "duration_s": 12.0,
        "road_width_m": 4.5,
        "v_max_mps": 22.22,
        "reference_path": straight(0.0, 0.0, 0.0, 300.0, 2.0),
        "ego": {"l_m": 0.0, "d_m": 0.0, "speed_mps": 8.0},
        "destination": {"from_l_m": 150.0, "to_l_m": 170.0},
        "navigation_waypoints": [{"l_m": 50.0 * k, "d_m": 0.0} for k in range(1, 6)],
        "agents": [{
            "id": "cyclist",
            "class": "cyclist",
            "prediction_noise_m": 0.2,
            "trajectory": {"type": "frenet_constant_velocity", "l_m": 25.0, "d_m": -1.0,
                           "speed_mps": 4.0},
        }],
        "policies": {
            "aggressive_overtake": [[2.0, 0.3, 16.0]],
            "yielding": [[2.0, 0.0, 4.0]],
        },
    })


def unprotected_left_turn():
    path = join(straight(0.0, 0.0, 0.0, 40.0), arc(40.0, 12.0, 12.0, -math.pi / 2, 0.0),
                straight(52.0, 12.0, math.pi / 2, 80.0))
    write("unprotected_left_turn", {
        "name": "unprotected_left_turn",
        "description": "Synthetic reconstruction: ego turns left across the path of an "
                       "oncoming vehicle going straight.",
        "duration_s": 14.0,
        "reference_path": path,
        "ego": {"l_m": 0.0, "d_m": 0.0, "speed_mps": 8.0},
        "destination": {"from_l_m": 90.0, "to_l_m": 110.0},
        "agents": [{
            "id": "oncoming",
            "class": "vehicle",
            "trajectory": {"type": "constant_velocity", "x_m": 100.0, "y_m": 3.5,
                           "heading_rad": math.pi, "speed_mps": 10.0},
        }],
        "policies": {
            "go_now": [[2.0, 0.0, 10.0]],
            "wait_then_go": [[2.0, 0.0, 2.0]] * 45 + [[2.0, 0.0, 9.0]],
        },
    })


def right_turn_merge():
    path = join(straight(0.0, 0.0, 0.0, 30.0), arc(30.0, -12.0, 12.0, math.pi / 2, 0.0),
                straight(42.0, -12.0, -math.pi / 2, 80.0))
    write("right_turn_merge", {
        "name": "right_turn_merge",
        "description": "Synthetic reconstruction: ego turns right into a lane used by a "
                       "vehicle arriving from the left.",
        "duration_s": 14.0,
        "reference_path": path,
        "ego": {"l_m": 0.0, "d_m": 0.0, "speed_mps": 8.0},
        "destination": {"from_l_m": 80.0, "to_l_m": 100.0},
        "agents": [{
            "id": "crossing",
            "class": "vehicle",
            "trajectory": {"type": "constant_velocity", "x_m": 42.0, "y_m": 28.0,
                           "heading_rad": -math.pi / 2, "speed_mps": 9.0},
        }],
        "policies": {
            "merge_ahead": [[2.0, 0.0, 12.0]],
            "merge_behind": [[2.0, 0.0, 3.0]] * 50 + [[2.0, 0.0, 9.0]],
        },
    })


def straight_left_turner():
    points = [{"t_s": 0.0, "x_m": 85.0, "y_m": 3.5}, {"t_s": 3.5, "x_m": 50.0, "y_m": 3.5}]
    arc_pts = arc(50.0, -8.0, 11.5, math.pi / 2, math.pi)
    for i, p in enumerate(arc_pts[1:], start=1):
        points.append({"t_s": round(3.5 + 2.0 * i / (len(arc_pts) - 1), 6),
                       "x_m": round(p[0], 6), "y_m": round(p[1], 6)})
    points.append({"t_s": 9.0, "x_m": 38.5, "y_m": -40.0})
    write("straight_left_turner", {
        "name": "straight_left_turner",
        "description": "Synthetic reconstruction: ego drives straight while an oncoming "
                       "vehicle turns left across its lane.",
        "duration_s": 14.0,
        "reference_path": straight(0.0, 0.0, 0.0, 200.0, 2.0),
        "ego": {"l_m": 0.0, "d_m": 0.0, "speed_mps": 10.0},
        "destination": {"from_l_m": 120.0, "to_l_m": 140.0},
        "agents": [{"id": "left_turner", "class": "vehicle",
                    "trajectory": {"type": "waypoints", "points": points}}],
        "policies": {
            "keep_speed": [[2.0, 0.0, 11.0]],
            "brake_and_go": [[2.0, 0.0, 3.0]] * 45 + [[2.0, 0.0, 12.0]],
        },
    })


def head_on():
    write("head_on", {
        "name": "head_on",
        "description": "Constructed check: a vehicle drives against traffic in the ego lane.",
        "duration_s": 10.0,
        "reference_path": straight(0.0, 0.0, 0.0, 200.0, 2.0),
        "ego": {"l_m": 0.0, "d_m": 0.0, "speed_mps": 10.0},
        "destination": {"from_l_m": 150.0, "to_l_m": 170.0},
        "agents": [{
            "id": "wrong_way_driver",
            "class": "vehicle",
            "trajectory": {"type": "constant_velocity", "x_m": 60.0, "y_m": 0.0,
                           "heading_rad": math.pi, "speed_mps": 10.0},
        }],
        "policies": {"non_yielding": [[2.0, 0.0, 15.0]]},
    })


def empty_road():
    write("empty_road", {
        "name": "empty_road",
        "description": "Constructed check: a gently curving road without other traffic.",
        "duration_s": 15.0,
        "reference_path": join(straight(0.0, 0.0, 0.0, 60.0),
                               arc(60.0, 200.0, 200.0, -math.pi / 2, -math.pi / 2 + 0.4, 2.0)),
        "ego": {"l_m": 0.0, "d_m": 0.0, "speed_mps": 10.0},
        "destination": {"from_l_m": 110.0, "to_l_m": 130.0},
        "navigation_waypoints": [{"l_m": 40.0, "d_m": 0.0}, {"l_m": 100.0, "d_m": 0.0}],
        "agents": [],
    })


if __name__ == "__main__":
    cyclist_following()
    unprotected_left_turn()
    right_turn_merge()
    straight_left_turner()
    head_on()
    empty_road()
