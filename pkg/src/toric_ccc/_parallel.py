import os
from concurrent.futures import ThreadPoolExecutor


def thread_count():
    try:
        return max(1, int(os.environ.get("TORIC_CCC_THREADS", "1")))
    except ValueError:
        return 1


def pmap(fn, items):
    """``list(map(fn, items))``, spread over TORIC_CCC_THREADS worker threads."""
    items = list(items)
    workers = thread_count()
    if workers == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
