from celery import group, shared_task
import logging

from overlap_lab.exceptions import OverlapLabError

from geometry.serializers import PointSetSerializer, point_set_payload
from hypergraphs.serializers import HypergraphSerializer

from .config import ExperimentConfig
from .embeddings import ChainResult, anneal_chain, bijection_counts

logger = logging.getLogger(__name__)


def _hypergraph(payload):
    serializer = HypergraphSerializer(data=payload)
    serializer.is_valid(raise_exception=True)
    return serializer.save()


def _points(payload):
    serializer = PointSetSerializer(data=payload)
    serializer.is_valid(raise_exception=True)
    return serializer.save()


@shared_task
def bijection_trials(hypergraph_payload, points_payload, seeds):
    """
    Task evaluating one chunk of random-bijection trials.
    Each seed gives one bijection; the counts come back in seed order.
    """
    try:
        hypergraph = _hypergraph(hypergraph_payload)
        points = _points(points_payload)
        counts = bijection_counts(hypergraph, points, seeds)
        logger.info(f"Bijection chunk finished: {len(counts)} trials on n={hypergraph.n}")
        return {
            'status': 'success',
            'message': 'Bijection trials evaluated',
            'counts': counts,
            'total': len(hypergraph.edges),
        }
    except Exception as e:
        logger.error(f"Error evaluating bijection trials: {str(e)}")
        return {
            'status': 'error',
            'message': f'Error evaluating bijection trials: {str(e)}',
            'counts': [],
        }


@shared_task
def annealing_chain(hypergraph_payload, config_payload, seed, chain):
    """
    Task running one annealing chain and returning its best embedding.
    """
    try:
        hypergraph = _hypergraph(hypergraph_payload)
        cfg = ExperimentConfig(**config_payload)
        result = anneal_chain(hypergraph, seed, cfg, chain=chain)
        logger.info(f"Chain {chain} finished with overlap {result.covered}/{result.total}")
        return {
            'status': 'success',
            'message': 'Annealing chain finished',
            'chain': chain,
            'seed': seed,
            'covered': result.covered,
            'total': result.total,
            'accepted': result.accepted,
            'history': result.best_history,
            'points': point_set_payload(result.points),
        }
    except Exception as e:
        logger.error(f"Error in annealing chain {chain}: {str(e)}")
        return {
            'status': 'error',
            'message': f'Error in annealing chain {chain}: {str(e)}',
            'chain': chain,
        }


def _collect(signatures):
    results = group(signatures).apply_async().get()
    failed = [r for r in results if r['status'] != 'success']
    if failed:
        raise OverlapLabError(failed[0]['message'])
    return results


def run_bijection_chunks(hypergraph, points, seeds, threads):
    """Split the trial seeds into ``threads`` contiguous chunks; counts keep the seed order."""
    payload = HypergraphSerializer(hypergraph).data
    cloud = point_set_payload(points)
    size = -(-len(seeds) // threads)
    chunks = [seeds[i:i + size] for i in range(0, len(seeds), size)]
    results = _collect([bijection_trials.s(payload, cloud, chunk) for chunk in chunks])
    return [c for r in results for c in r['counts']]


def run_anneal_chains(hypergraph, cfg, seeds):
    payload = HypergraphSerializer(hypergraph).data
    config_payload = cfg.as_dict()
    results = _collect([annealing_chain.s(payload, config_payload, s, i) for i, s in enumerate(seeds)])
    return [ChainResult(r['chain'], r['seed'], _points(r['points']), r['covered'], r['total'],
                        r['accepted'], r['history']) for r in results]
