# vim: set fileencoding=utf-8 :
#
# (C) 2026 The cmr developers
#    This program is free software; you can redistribute it and/or modify
#    it under the terms of the GNU General Public License as published by
#    the Free Software Foundation; either version 2 of the License, or
#    (at your option) any later version.
#
#    This program is distributed in the hope that it will be useful,
#    but WITHOUT ANY WARRANTY; without even the implied warranty of
#    MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
#    GNU General Public License for more details.
#
#    You should have received a copy of the GNU General Public License
#    along with this program; if not, please see
#    <http://www.gnu.org/licenses/>
"""
Shipped example pipelines, checked against the manifest of the corpus
they run on

gc: count G and C bases of a DNA corpus, a map counting per partition and
a sum reduce.

screening: the three best scored molecules of an SDF like corpus, a map
extracting 'score name' lines and a top 3 reduce.

coverage: mapped reads per chromosome of a SAM like corpus, a map dropping
low quality alignments, a repartition by chromosome and a map writing
one file per chromosome into a BinaryFiles output.
"""

import os

import cmr.log
from cmr.dataset import SDF_SEPARATOR, split_records
from cmr.engine import StageSpec
from cmr.errors import CmrIOError
from cmr.ingest import TEXT_FILE, Source
from cmr.ingest.corpus import ALIGNMENTS, DNA, MIN_MAPQ, SDF_LIKE, generate_corpus
from cmr.mountpoint import MountPoint
from cmr.pipeline import (FIELD_DELIMITED, MAP, REDUCE, REPARTITION_BY, SINK_TEXT,
                          KeyRule, PipelineSpec, SinkSpec, StageDef, emit_pipeline,
                          run_pipeline)

IMAGE = 'busybox'
DEMOS = ('gc', 'screening', 'coverage')

GC_MAP = "grep -o '[GC]' /dna | wc -l > /count"
GC_REDUCE = "awk '{s+=$1} END {print s}' /counts > /sum"

SCREEN_MAP = ("awk 'n==\"\"{n=$1} /^> <score>/{getline; print $1\" \"n} "
              "/^\\$\\$\\$\\$$/{n=\"\"}' /in.sdf > /out.txt")
SCREEN_REDUCE = "LC_ALL=C sort -rn /in.txt | head -3 > /out.txt"

COVERAGE_FILTER = "awk 'BEGIN {FS = \"\\t\"} $5 >= %d' /reads.sam > /mapped.sam" % MIN_MAPQ
# keys are co-located after the repartition, so file names can't clash
COVERAGE_COUNT = ("awk 'BEGIN {FS = \"\\t\"} {n[$3]++} END {for (c in n) "
                  "printf \"%s\\t%d\", c, n[c] > (\"/coverage/\" c)}' /chrom.sam")


def gc_pipeline(corpus, sink, depth=None):
    """The GC count pipeline over the DNA corpus at I{corpus}"""
    return PipelineSpec(
        Source(TEXT_FILE, corpus),
        [StageDef(MAP, StageSpec(MountPoint.text_file('/dna'),
                                 MountPoint.text_file('/count'), IMAGE, GC_MAP)),
         StageDef(REDUCE, StageSpec(MountPoint.text_file('/counts'),
                                    MountPoint.text_file('/sum'), IMAGE, GC_REDUCE),
                  depth_k=depth)],
        SinkSpec(SINK_TEXT, sink))


def screening_pipeline(corpus, sink, depth=None):
    """The top 3 screening pipeline over the SDF like corpus at I{corpus}"""
    return PipelineSpec(
        Source(TEXT_FILE, corpus, SDF_SEPARATOR),
        [StageDef(MAP, StageSpec(MountPoint.text_file('/in.sdf', SDF_SEPARATOR),
                                 MountPoint.text_file('/out.txt'), IMAGE, SCREEN_MAP)),
         StageDef(REDUCE, StageSpec(MountPoint.text_file('/in.txt'),
                                    MountPoint.text_file('/out.txt'), IMAGE, SCREEN_REDUCE),
                  depth_k=depth)],
        SinkSpec(SINK_TEXT, sink))


def coverage_pipeline(corpus, sink, partitions=4):
    """
    Mapped reads per chromosome of the alignments at I{corpus}

    @param partitions: partitions of the repartition by chromosome
    """
    return PipelineSpec(
        Source(TEXT_FILE, corpus),
        [StageDef(MAP, StageSpec(MountPoint.text_file('/reads.sam'),
                                 MountPoint.text_file('/mapped.sam'), IMAGE, COVERAGE_FILTER)),
         StageDef(REPARTITION_BY, key=KeyRule(FIELD_DELIMITED, delimiter=b'\t', field=2),
                  num_partitions=partitions),
         StageDef(MAP, StageSpec(MountPoint.text_file('/chrom.sam'),
                                 MountPoint.binary_files('/coverage'), IMAGE, COVERAGE_COUNT))],
        SinkSpec(SINK_TEXT, sink))


def _read_lines(path):
    try:
        with open(path, 'rb') as f:
            return [line.decode('utf-8') for line in split_records(f.read())]
    except (IOError, OSError) as err:
        raise CmrIOError("Can't read demo result '%s': %s" % (path, err))


def _run_demo(name, spec, workdir, config, backend):
    pipeline_file = os.path.join(workdir, '%s.pipeline' % name)
    with open(pipeline_file, 'w') as f:
        f.write(emit_pipeline(spec))
    cmr.log.info("Running the %s demo, pipeline in '%s'" % (name, pipeline_file))
    exit_code, report = run_pipeline(spec, config, backend)
    result = {'pipeline': pipeline_file, 'sink': spec.sink.path, 'report': report,
              'exit_code': exit_code}
    if exit_code == 0:
        result['result'] = _read_lines(spec.sink.path)
    return result


def gc_count_demo(workdir, config, size_bytes=1 << 20, seed=7, backend=None):
    """
    Count G and C bases of a generated corpus

    @param workdir: where corpus, pipeline file and result go
    @type config: L{cmr.pipeline.RunConfig}
    @returns: dict with the keys 'exit_code', 'result' (lines of the sink),
        'expected', 'match', 'pipeline', 'sink' and 'report'
    """
    corpus, manifest = generate_corpus(DNA, size_bytes, seed, workdir)
    spec = gc_pipeline(corpus, os.path.join(workdir, 'gc.txt'))
    result = _run_demo('gc', spec, workdir, config, backend)
    result['expected'] = [str(manifest['stats']['gc_count'])]
    result['match'] = result.get('result') == result['expected']
    return result


def screening_demo(workdir, config, size_bytes=256 << 10, seed=7, backend=None):
    """
    Find the three best scored molecules of a generated corpus

    @returns: same keys as L{gc_count_demo}
    """
    corpus, manifest = generate_corpus(SDF_LIKE, size_bytes, seed, workdir)
    spec = screening_pipeline(corpus, os.path.join(workdir, 'top.txt'))
    result = _run_demo('screening', spec, workdir, config, backend)
    result['expected'] = manifest['stats']['best']
    result['match'] = result.get('result') == result['expected']
    return result


def coverage_demo(workdir, config, size_bytes=256 << 10, seed=7, backend=None):
    """
    Count mapped reads per chromosome of a generated alignment corpus

    The lines come out grouped by partition, 'result' and 'expected' are
    both sorted by chromosome.

    @returns: same keys as L{gc_count_demo}
    """
    corpus, manifest = generate_corpus(ALIGNMENTS, size_bytes, seed, workdir)
    spec = coverage_pipeline(corpus, os.path.join(workdir, 'coverage.txt'))
    result = _run_demo('coverage', spec, workdir, config, backend)
    if 'result' in result:
        result['result'] = sorted(result['result'])
    result['expected'] = sorted('%s\t%d' % item
                                for item in manifest['stats']['coverage'].items())
    result['match'] = result.get('result') == result['expected']
    return result

# vim:et:ts=4:sw=4:et:sts=4:ai:set list listchars=tab\:»·,trail\:·:
