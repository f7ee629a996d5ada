# vim: set fileencoding=utf-8 :
"""
Full size corpora and wall clock scaling, run with CMR_LARGE_TESTS=1
"""

import multiprocessing
import os
import unittest

from cmr.bench import AUTO, run_bench
from cmr.dataset import SDF_SEPARATOR
from cmr.demos import gc_count_demo, gc_pipeline, screening_pipeline
from cmr.ingest import TEXT_FILE, Source, ingest
from cmr.ingest.corpus import DNA, SDF_LIKE, generate_corpus
from cmr.pipeline import run_pipeline

from . import ComponentTestBase
from .. testutils import skip_unless_large


@skip_unless_large
class TestLargeCorpora(ComponentTestBase):
    def test_gc_64mib(self):
        result = gc_count_demo(self._tmpdir, self.config(workers=4, slots=2),
                               size_bytes=64 << 20)
        self.assertEqual(result['exit_code'], 0)
        self.assertTrue(result['match'])
        ledger = result['report']['ledger']['totals']
        self.assertGreaterEqual(ledger['bytes_materialized'], 64 << 20)
        self.check_temp_empty()

    def test_screening_10k_molecules(self):
        corpus, manifest = generate_corpus(SDF_LIKE, 1536 << 10, 11, self._tmpdir)
        self.assertGreaterEqual(manifest['stats']['records'], 10000)
        ds = ingest(Source(TEXT_FILE, corpus, SDF_SEPARATOR), 8)
        self.assertEqual(ds.num_partitions, 8)
        self.assertEqual(ds.count(), manifest['stats']['records'])

        sink = os.path.join(self._tmpdir, 'top.txt')
        exit_code, _ = run_pipeline(screening_pipeline(corpus, sink),
                                    self.config(partitions=8))
        self.assertEqual(exit_code, 0)
        with open(sink) as f:
            self.assertEqual(f.read().splitlines(), manifest['stats']['best'])


@skip_unless_large
class TestWeakScaling(ComponentTestBase):
    def test_efficiency(self):
        """Growing data with a growing pool keeps the run time"""
        if multiprocessing.cpu_count() < 4:
            raise unittest.SkipTest("needs at least 4 CPUs")
        corpus, _ = generate_corpus(DNA, 32 << 20, 5, self._tmpdir)
        spec = gc_pipeline(corpus, os.path.join(self._tmpdir, 'gc.txt'))
        rows = run_bench(spec, [1, 2, 4], AUTO, self.config())
        for row in rows:
            self.assertGreaterEqual(row['wse'], 0.7, "weak scaling at %s" % row)

# vim:et:ts=4:sw=4:et:sts=4:ai:set list listchars=tab\:»·,trail\:·:
