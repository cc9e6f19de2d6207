from pdes.benchmarks import beam_solution, make_benchmark
from schemas.grid import GridSolution
from solvers.request import GridRequest


def solve_beam(request: GridRequest) -> GridSolution:
    """Closed-form sin(x) cos(4 pi t) on the requested grid."""
    _, domain = make_benchmark("euler_bernoulli")
    request.check_within(domain)
    xs = request.xs
    values = beam_solution(xs[None, :], request.times[:, None])
    return GridSolution(time_step=request.time_step, n_channels=1, xs=xs, values=values)
