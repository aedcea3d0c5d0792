from .profile import timeit
