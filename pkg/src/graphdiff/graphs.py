"""Graphs, normalized Laplacians, spectra, graph filters, and synthetic data.

The Spectrum object is the shared spectral backbone of the package: the
normalized Laplacian L = I - D^{-1/2} A D^{-1/2}, its eigenvectors V
(columns, ascending eigenvalues) and the graph Fourier transform x~ = V^T x.
"""

import numpy as np

from .errors import ValidationError

# Absolute tolerance on |M - M^T| before a matrix is rejected as asymmetric.
SYMMETRY_TOL = 1e-10
# Invariant tolerances checked when a Spectrum is constructed.
RECONSTRUCTION_TOL = 1e-8
ORTHONORMALITY_TOL = 1e-8


class Graph:
    """Undirected weighted graph defined by a validated adjacency matrix.

    Requires a square symmetric nonnegative matrix with zero diagonal and
    no isolated nodes (the normalized Laplacian is undefined for degree-0
    nodes, so those are rejected rather than patched).
    """

    def __init__(self, adjacency, node_labels=None):
        adjacency = np.array(adjacency, dtype=np.float64)
        if adjacency.ndim != 2 or adjacency.shape[0] != adjacency.shape[1]:
            raise ValidationError(
                f"adjacency must be a square matrix, got shape {adjacency.shape}"
            )
        if not np.all(np.isfinite(adjacency)):
            raise ValidationError("adjacency contains non-finite entries")
        asym = np.max(np.abs(adjacency - adjacency.T)) if adjacency.size else 0.0
        if asym > SYMMETRY_TOL:
            raise ValidationError(f"adjacency is not symmetric (max |A - A^T| = {asym:g})")
        if np.any(np.diag(adjacency) != 0.0):
            bad = int(np.flatnonzero(np.diag(adjacency))[0])
            raise ValidationError(f"adjacency has a nonzero diagonal entry at node {bad}")
        if np.any(adjacency < 0.0):
            raise ValidationError("adjacency has negative entries")
        degrees = adjacency.sum(axis=1)
        if np.any(degrees == 0.0):
            bad = int(np.flatnonzero(degrees == 0.0)[0])
            raise ValidationError(f"node {bad} is isolated (zero degree)")
        if node_labels is not None and len(node_labels) != adjacency.shape[0]:
            raise ValidationError("node_labels length does not match number of nodes")
        self.adjacency = adjacency
        self.node_labels = list(node_labels) if node_labels is not None else None

    @property
    def num_nodes(self):
        return self.adjacency.shape[0]

    @property
    def degrees(self):
        return self.adjacency.sum(axis=1)


def build_normalized_laplacian(adjacency):
    """Return L = I - D^{-1/2} A D^{-1/2} for a valid adjacency matrix.

    Accepts a Graph or a raw matrix; raw matrices are validated first
    (symmetry, zero diagonal, nonnegativity, no isolated nodes).
    """
    graph = adjacency if isinstance(adjacency, Graph) else Graph(adjacency)
    a = graph.adjacency
    d_inv_sqrt = 1.0 / np.sqrt(graph.degrees)
    lap = -(d_inv_sqrt[:, None] * a * d_inv_sqrt[None, :])
    np.fill_diagonal(lap, 1.0 + np.diag(lap))
    # Symmetrize to kill the last-ulp asymmetry of the scaled product.
    lap = 0.5 * (lap + lap.T)
    return lap


class Spectrum:
    """Eigendecomposition of a symmetric PSD matrix, used as the GFT basis.

    Eigenvalues are ascending; each eigenvector's largest-magnitude entry is
    positive so decompositions are deterministic across runs and platforms.
    """

    def __init__(self, laplacian, eigenvectors, eigenvalues, degree_vector=None):
        laplacian = np.asarray(laplacian, dtype=np.float64)
        eigenvectors = np.asarray(eigenvectors, dtype=np.float64)
        eigenvalues = np.asarray(eigenvalues, dtype=np.float64)
        n = laplacian.shape[0]
        recon = eigenvectors @ (eigenvalues[:, None] * eigenvectors.T)
        recon_err = np.max(np.abs(recon - laplacian))
        if recon_err > RECONSTRUCTION_TOL:
            raise ValidationError(
                f"eigendecomposition does not reconstruct the matrix (err {recon_err:g})"
            )
        ortho_err = np.max(np.abs(eigenvectors.T @ eigenvectors - np.eye(n)))
        if ortho_err > ORTHONORMALITY_TOL:
            raise ValidationError(f"eigenvectors are not orthonormal (err {ortho_err:g})")
        if np.any(np.diff(eigenvalues) < 0.0):
            raise ValidationError("eigenvalues must be nondecreasing")
        self.laplacian = laplacian
        self.eigenvectors = eigenvectors
        self.eigenvalues = eigenvalues
        self.degree_vector = (
            np.asarray(degree_vector, dtype=np.float64) if degree_vector is not None else None
        )

    @property
    def num_nodes(self):
        return self.laplacian.shape[0]

    @classmethod
    def from_graph(cls, graph):
        lap = build_normalized_laplacian(graph)
        spectrum = eigendecompose(lap)
        spectrum.degree_vector = graph.degrees
        return spectrum


def eigendecompose(matrix, degree_vector=None):
    """Dense symmetric eigendecomposition with a deterministic sign convention.

    Eigenvalues are sorted ascending and tiny negative values (above -1e-10,
    pure round-off on PSD input) are clamped to zero. Each eigenvector is
    flipped so its largest-magnitude entry is positive.
    """
    matrix = np.asarray(matrix, dtype=np.float64)
    asym = np.max(np.abs(matrix - matrix.T))
    if asym > SYMMETRY_TOL:
        raise ValidationError(f"matrix is not symmetric (max |M - M^T| = {asym:g})")
    eigenvalues, eigenvectors = np.linalg.eigh(matrix)
    tiny = (eigenvalues < 0.0) & (eigenvalues > -1e-10)
    eigenvalues[tiny] = 0.0
    flip = eigenvectors[np.argmax(np.abs(eigenvectors), axis=0), np.arange(matrix.shape[0])] < 0
    eigenvectors[:, flip] *= -1.0
    return Spectrum(matrix, eigenvectors, eigenvalues, degree_vector=degree_vector)


def gft(spectrum, x):
    """Graph Fourier transform V^T x. Accepts a vector or an (M, N) batch."""
    x = np.asarray(x, dtype=np.float64)
    if x.shape[-1] != spectrum.num_nodes:
        raise ValidationError(
            f"signal length {x.shape[-1]} does not match graph size {spectrum.num_nodes}"
        )
    return x @ spectrum.eigenvectors


def igft(spectrum, coeffs):
    """Inverse graph Fourier transform V x~."""
    coeffs = np.asarray(coeffs, dtype=np.float64)
    if coeffs.shape[-1] != spectrum.num_nodes:
        raise ValidationError(
            f"coefficient length {coeffs.shape[-1]} does not match graph size "
            f"{spectrum.num_nodes}"
        )
    return coeffs @ spectrum.eigenvectors.T


def apply_polynomial_filter(spectrum, coeffs, x, method="matrix"):
    """Apply the polynomial graph filter sum_k theta_k L^k to a signal.

    method="matrix" iterates p <- L p and accumulates; method="spectral"
    evaluates the polynomial on the eigenvalues and transforms back. Both
    paths agree to high precision and are cross-checked in the test suite.
    """
    coeffs = np.asarray(coeffs, dtype=np.float64)
    x = np.asarray(x, dtype=np.float64)
    if coeffs.ndim != 1 or coeffs.size < 1:
        raise ValidationError("coeffs must be a nonempty 1-D array")
    if x.shape[-1] != spectrum.num_nodes:
        raise ValidationError("signal length does not match graph size")
    if method == "matrix":
        out = coeffs[0] * x
        power = x
        for theta_k in coeffs[1:]:
            power = power @ spectrum.laplacian.T
            out = out + theta_k * power
        return out
    if method == "spectral":
        response = np.polynomial.polynomial.polyval(spectrum.eigenvalues, coeffs)
        return igft(spectrum, gft(spectrum, x) * response)
    raise ValidationError(f"unknown filter method {method!r}")


def _is_connected(adjacency):
    n = adjacency.shape[0]
    seen = np.zeros(n, dtype=bool)
    stack = [0]
    seen[0] = True
    while stack:
        node = stack.pop()
        for nbr in np.flatnonzero(adjacency[node]):
            if not seen[nbr]:
                seen[nbr] = True
                stack.append(int(nbr))
    return bool(seen.all())


def sbm_communities(nodes_per_community, num_communities):
    """Community index per node for the block layout used by generate_sbm."""
    return np.repeat(np.arange(num_communities), nodes_per_community)


def generate_sbm(nodes_per_community, num_communities, p_in, p_out, seed, max_retries=100):
    """Sample a connected stochastic block model graph.

    Nodes are grouped in consecutive blocks (see sbm_communities). The draw
    is retried up to max_retries times until the graph is connected; with a
    fixed seed the whole procedure is bit-reproducible.
    """
    if nodes_per_community < 1 or num_communities < 1:
        raise ValidationError("nodes_per_community and num_communities must be >= 1")
    if not (0.0 < p_in <= 1.0):
        raise ValidationError(f"p_in must be in (0, 1], got {p_in}")
    if not (0.0 <= p_out <= 1.0):
        raise ValidationError(f"p_out must be in [0, 1], got {p_out}")
    if p_in < p_out:
        raise ValidationError("p_in must be at least p_out")
    n = nodes_per_community * num_communities
    community = sbm_communities(nodes_per_community, num_communities)
    prob = np.where(community[:, None] == community[None, :], p_in, p_out)
    rng = np.random.default_rng(seed)
    for _ in range(max_retries):
        upper = np.triu(rng.random((n, n)) < prob, k=1)
        adjacency = (upper | upper.T).astype(np.float64)
        if adjacency.sum(axis=1).min() > 0 and _is_connected(adjacency):
            return Graph(adjacency)
    raise ValidationError(
        f"could not draw a connected SBM graph in {max_retries} retries; "
        "consider increasing p_in"
    )


def generate_smooth_signals(graph, community_assignment, num_signals, seed, tau=5.0):
    """Draw community-mean Gaussian signals and smooth them on the graph.

    Raw signals are N(+1, 1) per node in even communities and N(-1, 1) in
    odd ones, then passed through the low-pass filter (I + tau L)^{-1}.
    tau=0 returns the raw draws unchanged.
    """
    community_assignment = np.asarray(community_assignment)
    if community_assignment.shape != (graph.num_nodes,):
        raise ValidationError("community assignment length does not match graph size")
    if num_signals < 1:
        raise ValidationError("num_signals must be >= 1")
    means = np.where(community_assignment % 2 == 0, 1.0, -1.0)
    rng = np.random.default_rng(seed)
    raw = means[None, :] + rng.standard_normal((num_signals, graph.num_nodes))
    if tau == 0.0:
        return raw
    lap = build_normalized_laplacian(graph)
    smoother = np.eye(graph.num_nodes) + tau * lap
    return np.linalg.solve(smoother, raw.T).T
