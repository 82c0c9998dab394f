"""Independent Fibonacci reference, indexed so that F(1) = F(2) = 1."""


def fibonacci(n: int) -> int:
    if n < 0:
        raise ValueError("n must be non-negative")
    a, b = 0, 1
    for _ in range(n):
        a, b = b, a + b
    return a
