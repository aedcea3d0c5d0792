from functools import wraps


# Borrowed from: funcy
def collecting(func):
    """ Convert a generator to a list-returning function

    Example:
        @collecting
        def stage_rows(schedule):
            for k in schedule.stage_indices:
                yield make_stage(schedule, k).export()
    """
    @wraps(func)
    def wrapper(*args, **kwargs):
        return list(
            func(*args, **kwargs)
        )
    return wrapper
