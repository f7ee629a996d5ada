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
Deterministic synthetic corpora for tests and benchmarks

Each corpus comes with a manifest.json holding the statistics the
pipelines are expected to compute, gathered while generating.
"""

import json
import os
import random

import cmr.log
from cmr.dataset import SDF_SEPARATOR
from cmr.errors import CmrIOError, ConfigurationError

DNA = 'dna'
SDF_LIKE = 'sdf_like'
NUMBERS = 'numbers'
ALIGNMENTS = 'alignments'
KINDS = (DNA, SDF_LIKE, NUMBERS, ALIGNMENTS)

FILENAMES = {DNA: 'dna.txt',
             SDF_LIKE: 'molecules.sdf',
             NUMBERS: 'numbers.txt',
             ALIGNMENTS: 'reads.sam'}
MANIFEST = 'manifest.json'

DNA_LINE = 60
READ_LENGTH = 36
# reads below this mapping quality don't count as mapped
MIN_MAPQ = 20
CHROMOSOMES = ['chr%d' % n for n in range(1, 23)] + ['chrX', 'chrY']
# maps every byte value onto a base
_BASES = bytes(bytearray(b'ACGT'[b & 3] for b in range(256)))

_MOLECULE = ("%s\n"
             "  cmr-corpus\n"
             "\n"
             "  0  0  0  0  0  0  0  0  0  0999 V2000\n"
             "M  END\n"
             "> <score>\n"
             "%s")


def _dna(rng, size_bytes, out):
    stats = {'records': 0, 'bases': 0, 'gc_count': 0}
    remaining = size_bytes
    while remaining > 0:
        width = min(DNA_LINE, max(1, remaining - 1))
        raw = rng.getrandbits(8 * width).to_bytes(width, 'little')
        line = raw.translate(_BASES)
        out.write(line + b'\n')
        stats['records'] += 1
        stats['bases'] += width
        stats['gc_count'] += line.count(b'G') + line.count(b'C')
        remaining -= width + 1
    return stats


def _numbers(rng, size_bytes, out):
    count = 0
    written = 0
    while written < size_bytes:
        count += 1
        written += len(str(count)) + 1
    numbers = list(range(1, count + 1))
    rng.shuffle(numbers)
    out.write(''.join('%d\n' % n for n in numbers).encode('ascii'))
    return {'records': count, 'sum': count * (count + 1) // 2}


def _sdf_like(rng, size_bytes, out):
    """Molecules with a name and a unique score, best scores first in the stats"""
    seen = set()
    scored = []
    written = 0
    while written < size_bytes:
        value = rng.randint(1, 10 ** 9)
        if value in seen:
            continue
        seen.add(value)
        name = 'mol-%06d' % (len(scored) + 1)
        score = '%d.%03d' % divmod(value, 1000)
        record = (_MOLECULE % (name, score)).encode('ascii')
        out.write(record + SDF_SEPARATOR)
        written += len(record) + len(SDF_SEPARATOR)
        scored.append((value, score, name))
    best = sorted(scored, reverse=True)[:3]
    return {'records': len(scored),
            'best': ['%s %s' % (score, name) for _, score, name in best]}


def _alignments(rng, size_bytes, out):
    """
    Tab separated alignment lines: read name, flag, chromosome,
    position, mapping quality, cigar and sequence
    """
    coverage = {}
    count = 0
    written = 0
    while written < size_bytes:
        count += 1
        chrom = rng.choice(CHROMOSOMES)
        pos = rng.randint(1, 10 ** 8)
        mapq = rng.randint(0, 60)
        flag = rng.choice((0, 16))
        seq = rng.getrandbits(8 * READ_LENGTH).to_bytes(READ_LENGTH, 'little')
        line = ('read-%07d\t%d\t%s\t%d\t%d\t%dM\t' % (count, flag, chrom, pos, mapq, READ_LENGTH)
                ).encode('ascii') + seq.translate(_BASES) + b'\n'
        out.write(line)
        written += len(line)
        if mapq >= MIN_MAPQ:
            coverage[chrom] = coverage.get(chrom, 0) + 1
    return {'records': count, 'min_mapq': MIN_MAPQ, 'coverage': coverage}


def generate_corpus(kind, size_bytes, seed, outdir):
    """
    Write a corpus of about I{size_bytes} bytes and its manifest

    The same (kind, size_bytes, seed) always gives byte identical files.

    @param kind: one of L{KINDS}
    @param size_bytes: approximate size of the corpus
    @param seed: seed of the pseudo random generator
    @param outdir: directory to write to, created if missing
    @returns: (path of the corpus, manifest)
    @rtype: C{tuple} of C{str} and C{dict}
    """
    generators = {DNA: _dna, SDF_LIKE: _sdf_like, NUMBERS: _numbers,
                  ALIGNMENTS: _alignments}
    if kind not in generators:
        raise ConfigurationError("Unknown corpus kind '%s', use one of %s"
                                 % (kind, ", ".join(KINDS)))
    if size_bytes < 1:
        raise ConfigurationError("Corpus size must be positive, got %d" % size_bytes)
    rng = random.Random(seed)
    path = os.path.join(outdir, FILENAMES[kind])
    try:
        if not os.path.isdir(outdir):
            os.makedirs(outdir)
        with open(path, 'wb') as out:
            stats = generators[kind](rng, size_bytes, out)
        manifest = {'kind': kind, 'seed': seed, 'size': os.path.getsize(path),
                    'file': FILENAMES[kind], 'stats': stats}
        with open(os.path.join(outdir, MANIFEST), 'w') as f:
            json.dump(manifest, f, indent=2, sort_keys=True)
            f.write('\n')
    except (IOError, OSError) as err:
        raise CmrIOError("Failed to write corpus to '%s': %s" % (outdir, err))
    cmr.log.info("Generated %s corpus of %d bytes at '%s'" % (kind, manifest['size'], path))
    return path, manifest


def read_manifest(outdir):
    try:
        with open(os.path.join(outdir, MANIFEST)) as f:
            return json.load(f)
    except (IOError, OSError, ValueError) as err:
        raise CmrIOError("Can't read the manifest in '%s': %s" % (outdir, err))

# vim:et:ts=4:sw=4:et:sts=4:ai:set list listchars=tab\:»·,trail\:·:
