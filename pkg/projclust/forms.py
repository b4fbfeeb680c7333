# projclust/forms.py

import re
import math

from projclust.utils.harness import COUNTEREXAMPLE_KINDS, TASKS
from projclust.utils.instances import KINDS

def parse_d_values(text):
    """Parse '5,10,15' or a range '2..40' into a tuple of ints"""
    text = (text or '').strip()
    match = re.fullmatch(r'(\d+)\s*\.\.\s*(\d+)', text)
    if match:
        lo, hi = int(match.group(1)), int(match.group(2))
        return tuple(range(lo, hi + 1))
    return tuple(int(part) for part in text.split(',') if part.strip())

def validate_d_values(d_values):
    """Validate projection dimensions"""
    if not d_values:
        return False, "At least one projection dimension is required"
    if any(d < 1 for d in d_values):
        return False, "Projection dimensions must be at least 1"
    if any(b <= a for a, b in zip(d_values, d_values[1:])):
        return False, "Projection dimensions must be strictly ascending"
    return True, "Valid dimensions"

def validate_trials(trials):
    """Validate trial count"""
    if trials < 1:
        return False, "Trials must be at least 1"
    return True, "Valid trials"

def validate_epsilon(epsilon):
    """Validate relative-error target"""
    if not math.isfinite(epsilon) or not 0.0 < epsilon <= 1.0:
        return False, "Epsilon must lie in (0, 1]"
    return True, "Valid epsilon"

def validate_budget(budget, n=None):
    """Validate facility budget"""
    if budget is None:
        return True, "No budget"
    if budget < 1:
        return False, "Facility budget must be at least 1"
    if n is not None and budget > n:
        return False, f"Facility budget cannot exceed the {n} points"
    return True, "Valid budget"

def validate_seed(seed):
    """Validate 64-bit seed"""
    if not 0 <= seed < 2 ** 64:
        return False, "Seed must lie in [0, 2**64)"
    return True, "Valid seed"

def validate_kind(kind):
    """Validate instance generator kind"""
    if kind not in KINDS:
        return False, f"Kind must be one of: {', '.join(KINDS)}"
    return True, "Valid kind"

def validate_counterexample(kind):
    """Validate counterexample kind"""
    if kind not in COUNTEREXAMPLE_KINDS:
        return False, f"Counterexample must be one of: {', '.join(COUNTEREXAMPLE_KINDS)}"
    return True, "Valid counterexample"

def validate_task(task):
    """Validate sweep task"""
    if task not in TASKS:
        return False, f"Task must be one of: {', '.join(TASKS)}"
    return True, "Valid task"

def parse_params(pairs):
    """
    Parse repeated key=value construction overrides

    Returns:
        tuple: (bool, dict or str) - (is_valid, params or error_message)
    """
    params = {}
    for pair in pairs or ():
        key, sep, value = pair.partition('=')
        key = key.strip()
        if not sep or not key:
            return False, f"Expected key=value, got {pair!r}"
        try:
            number = float(value)
        except ValueError:
            return False, f"Parameter {key} must be numeric, got {value!r}"
        if not math.isfinite(number):
            return False, f"Parameter {key} must be finite"
        params[key] = int(number) if number.is_integer() and key in ('C', 'd') else number
    return True, params
