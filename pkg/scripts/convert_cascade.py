#!/usr/bin/env python3
"""Regenerate the bundled frontal-face cascade XML from a JSON conversion.

The classic stump-based 20x20 frontal-face cascade (created by Rainer
Lienhart, distributed with OpenCV under its BSD-style license) circulates
in several mechanical JSON conversions, e.g. the `tracking` npm package's
``assets/opencv_haarcascade_frontalface_alt.js``.  This script converts
such a JSON form back into the standard ``opencv_storage`` stump-stage
XML layout consumed by emoface.faceprep.

Usage:
    npm pack tracking && tar xzf tracking-*.tgz
    python scripts/convert_cascade.py \
        package/assets/opencv_haarcascade_frontalface_alt.js \
        src/emoface/assets/haarcascade_frontalface_alt.xml
"""

from __future__ import annotations

import json
import sys


def load_js_object(path: str) -> dict:
    src = open(path, "r", encoding="utf-8").read()
    start = src.index("{")
    end = src.rindex("}")
    return json.loads(src[start : end + 1])


def emit_xml(data: dict, out_path: str, name: str = "haarcascade_frontalface_alt") -> None:
    lines = [
        '<?xml version="1.0"?>',
        "<!--",
        "  Stump-based 20x20 gentle adaboost frontal face detector,",
        "  created by Rainer Lienhart and distributed with OpenCV under",
        "  its BSD-style license.  Reconstructed mechanically from a JSON",
        "  conversion of the original haarcascade_frontalface_alt.xml.",
        "-->",
        "<opencv_storage>",
        f'<{name} type_id="opencv-haar-classifier">',
        f"  <size>{data['size'].strip()}</size>",
        "  <stages>",
    ]
    for stage in data["stages"]:
        lines.append("    <_>")
        lines.append("      <trees>")
        for tree in stage["trees"]:
            lines.append("        <_>")
            for node in tree:
                feat = node["feature"]
                lines.append("          <_>")
                lines.append("            <feature>")
                lines.append("              <rects>")
                for rect in feat["rects"]:
                    lines.append(f"                <_>{rect.strip()}</_>")
                lines.append("              </rects>")
                lines.append(f"              <tilted>{feat['tilted'].strip()}</tilted>")
                lines.append("            </feature>")
                lines.append(f"            <threshold>{node['threshold'].strip()}</threshold>")
                lines.append(f"            <left_val>{node['left_val'].strip()}</left_val>")
                lines.append(f"            <right_val>{node['right_val'].strip()}</right_val>")
                lines.append("          </_>")
            lines.append("        </_>")
        lines.append("      </trees>")
        lines.append(
            f"      <stage_threshold>{stage['stage_threshold'].strip()}</stage_threshold>"
        )
        lines.append(f"      <parent>{stage['parent'].strip()}</parent>")
        lines.append(f"      <next>{stage['next'].strip()}</next>")
        lines.append("    </_>")
    lines += ["  </stages>", f"</{name}>", "</opencv_storage>", ""]
    with open(out_path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines))


def main() -> int:
    if len(sys.argv) != 3:
        print(__doc__.strip(), file=sys.stderr)
        return 1
    data = load_js_object(sys.argv[1])
    if data.get("type_id") != "opencv-haar-classifier":
        print("input does not look like a converted haar cascade", file=sys.stderr)
        return 1
    emit_xml(data, sys.argv[2])
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
