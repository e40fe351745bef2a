import hashlib

import numpy as np


def merge_dicts(dict1: dict, dict2: dict) -> dict:
    """Recursively merge two dictionaries; values of dict2 win, lists are replaced."""
    result = dict1.copy()

    for key, value in dict2.items():
        if key in result and isinstance(result[key], dict) and isinstance(value, dict):
            result[key] = merge_dicts(result[key], value)
        else:
            result[key] = value

    return result


def drop_none(values: dict) -> dict:
    """Remove keys whose value is None, recursing into nested dictionaries."""
    return {
        key: drop_none(value) if isinstance(value, dict) else value
        for key, value in values.items()
        if value is not None
    }


def array_digest(values: np.ndarray) -> str:
    """Generate a SHA-256 hex digest of an array's dtype, shape and raw bytes.

    Args:
        values: The array to fingerprint.

    Returns:
        str: Hex digest, equal for arrays that are bitwise equal.
    """

    values = np.ascontiguousarray(values)
    digest = hashlib.sha256()
    digest.update(str(values.dtype).encode("utf-8"))
    digest.update(str(values.shape).encode("utf-8"))
    digest.update(values.tobytes())
    return digest.hexdigest()
