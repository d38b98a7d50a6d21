"""Registry of acceptance-criterion outcomes, printed in the pytest terminal summary."""

RESULTS = []


def record(label, ok, detail):
    line = f"{label}: {'PASS' if ok else 'FAIL'} | {detail}"
    RESULTS.append(line)
    print(line)
    return ok
