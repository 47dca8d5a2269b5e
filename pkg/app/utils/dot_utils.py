from typing import Dict, Iterable, List, Optional, Sequence, Tuple


def _quote(label: str) -> str:
    return '"%s"' % str(label).replace('"', '\\"')


def digraph(
    labels: Sequence[str],
    edges: Iterable[Tuple[int, int]],
    name: str = "G",
    rankdir: str = "BT",
    extra_edges: Optional[Iterable[Tuple[int, int]]] = None,
) -> str:
    """
    DOT 텍스트를 만듭니다.

    edges 는 (아래, 위) 인덱스 쌍이며 rankdir=BT 로 위쪽 방향 그래프가 됩니다.
    extra_edges 는 점선으로 그립니다 (사상 표시용).
    """
    result = ["digraph %s {" % name, "    rankdir=%s;" % rankdir]
    for index, label in enumerate(labels):
        result.append("    n%d [label=%s];" % (index, _quote(label)))
    for low, high in edges:
        result.append("        n%d -> n%d;" % (low, high))
    for source, target in extra_edges or ():
        result.append("        n%d -> n%d [style=dashed];" % (source, target))
    result.append("}")
    return "\n".join(result)


def clustered_digraph(
    clusters: Dict[str, Tuple[Sequence[str], Iterable[Tuple[int, int]]]],
    arrows: Iterable[Tuple[str, int, str, int]],
    name: str = "G",
) -> str:
    """
    여러 poset 을 subgraph cluster 로 묶고 cluster 간 화살표를 점선으로 그립니다.

    arrows: (출발 cluster, 출발 인덱스, 도착 cluster, 도착 인덱스)
    """
    result: List[str] = ["digraph %s {" % name, "    rankdir=BT;", "    compound=true;"]
    for cluster, (labels, edges) in clusters.items():
        result.append("    subgraph cluster_%s {" % cluster)
        result.append("        label=%s;" % _quote(cluster))
        for index, label in enumerate(labels):
            result.append("        %s_%d [label=%s];" % (cluster, index, _quote(label)))
        for low, high in edges:
            result.append("        %s_%d -> %s_%d;" % (cluster, low, cluster, high))
        result.append("    }")
    for source_cluster, source, target_cluster, target in arrows:
        result.append(
            "    %s_%d -> %s_%d [style=dashed,color=blue];"
            % (source_cluster, source, target_cluster, target)
        )
    result.append("}")
    return "\n".join(result)
