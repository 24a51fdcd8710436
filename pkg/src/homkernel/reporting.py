import json
from typing import Any, Dict, List

from src.homkernel.homology import BettiTable

SCHEMA = "homkernel/1"
FORMATS = ("text", "json")


def new_document(source: str, field: str) -> Dict[str, Any]:
    return {"schema": SCHEMA, "source": source, "field": field, "records": [], "passed": True, "exit_code": 0}


def betti_from_dict(payload: Dict[str, Any]) -> BettiTable:
    return BettiTable({(i, j): v for i, j, v in payload["entries"]}, payload["bound"])


def _render_module(payload: Dict[str, Any], indent: str) -> List[str]:
    if payload.get("beta0", 0) == 0:
        return [f"{indent}zero module"]
    lines = [
        f"{indent}generators: {payload['beta0']} in degrees {payload['degrees']}, relations: {payload['beta1']}",
        f"{indent}hilbert from degree {payload['hilbert_start']}: {payload['hilbert']}",
        f"{indent}length: {payload['length']}",
        f"{indent}annihilator: ({', '.join(payload['annihilator'])})",
    ]
    return lines


def _render_value(key: str, value: Any, indent: str) -> List[str]:
    if key == "betti" and isinstance(value, dict):
        return [f"{indent}betti:"] + [indent + "  " + row for row in betti_from_dict(value).render().splitlines()]
    if isinstance(value, dict) and "beta0" in value:
        return [f"{indent}{key}:"] + _render_module(value, indent + "  ")
    if isinstance(value, dict):
        lines = [f"{indent}{key}:"]
        for inner_key, inner in value.items():
            lines.extend(_render_value(inner_key, inner, indent + "  "))
        return lines
    if isinstance(value, list) and value and isinstance(value[0], dict):
        lines = [f"{indent}{key}:"]
        for index, item in enumerate(value):
            lines.extend(_render_value(f"[{index}]", item, indent + "  "))
        return lines
    if isinstance(value, bool):
        value = "yes" if value else "no"
    return [f"{indent}{key}: {value}"]


def render_text(document: Dict[str, Any]) -> str:
    if "results" in document:
        parts = [render_text(result) for result in document["results"]]
        parts.append(f"ALL {'PASS' if document['passed'] else 'FAIL'} (exit {document['exit_code']})")
        return "\n\n".join(parts)
    if "runs" in document:
        parts = [f"== {document['example_id']}: {document['description']}"]
        parts.extend(render_text(run) for run in document["runs"])
        return "\n".join(parts)
    lines = [f"# {document['source']} over {document['field']}"]
    for record in document["records"]:
        status = record["status"].upper()
        lines.append(f"[{record['line']}:{record['column']}] {status} {record['statement']}")
        if record.get("error"):
            lines.append(f"  error: {record['error']}")
        for key, value in (record.get("result") or {}).items():
            lines.extend(_render_value(key, value, "  "))
    verdict = "PASS" if document["passed"] else "FAIL"
    lines.append(f"{verdict} (exit {document['exit_code']})")
    if "elapsed_sec" in document:
        lines.append(f"elapsed: {document['elapsed_sec']:.3f}s")
    return "\n".join(lines)


def render_json(document: Dict[str, Any]) -> str:
    return json.dumps(document, indent=2, sort_keys=False)


def emit(document: Dict[str, Any], fmt: str = "text") -> bytes:
    if fmt not in FORMATS:
        raise ValueError(f"Unsupported format: {fmt}")
    text = render_json(document) if fmt == "json" else render_text(document)
    return (text + "\n").encode("utf-8")
