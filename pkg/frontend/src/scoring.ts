// Client-side mirror of the scoring rubric and evidence rules. Used for the
// live preview badge and to block invalid submissions before they reach the
// server; stored scores always come back from the server, which stays
// authoritative.

import type { EvidenceItem, Metrics, RatingLevel } from './api.js';

const POINTS: Record<RatingLevel, number> = { low: 1, medium: 2, high: 3 };

export function previewScore(metrics: Metrics): number {
  const total =
    POINTS[metrics.coverage] + POINTS[metrics.robustness] + POINTS[metrics.input_diversity];
  if (total === 3) return 1;
  if (total <= 5) return 2;
  if (total <= 7) return 3;
  if (total === 8) return 4;
  return 5;
}

export interface DraftValidation {
  ok: boolean;
  problems: string[];
}

export function validateDraft(draft: {
  na: boolean;
  metrics: Partial<Record<'coverage' | 'robustness' | 'input_diversity', RatingLevel>>;
  evidence: EvidenceItem[];
}): DraftValidation {
  const problems: string[] = [];
  const usable = draft.evidence.filter((item) => item.description.trim().length > 0);
  if (draft.evidence.some((item) => item.description.trim().length === 0)) {
    problems.push('Every evidence item needs a non-empty description.');
  }
  if (draft.na) {
    if (!usable.some((item) => item.kind === 'not_applicable_justification')) {
      problems.push(
        'A not-applicable answer needs at least one evidence item of kind ' +
          '"not applicable: justification".',
      );
    }
  } else {
    for (const metric of ['coverage', 'robustness', 'input_diversity'] as const) {
      if (!draft.metrics[metric]) {
        problems.push(`Pick a ${metric.replace('_', ' ')} rating (or mark the target N/A).`);
      }
    }
    if (usable.length === 0) {
      problems.push('A scored answer needs at least one evidence item.');
    }
  }
  return { ok: problems.length === 0, problems };
}

// Non-binding hint fed by the sub-statement coverage checklist on topic
// targets: below 1/3 of applicable sub-statements is low, 2/3 and up is high.
export function suggestCoverage(covered: number, applicable: number): RatingLevel {
  if (applicable < 1 || covered < 0 || covered > applicable) {
    throw new RangeError(`covered must sit within 0..${applicable}`);
  }
  if (3 * covered < applicable) return 'low';
  if (3 * covered >= 2 * applicable) return 'high';
  return 'medium';
}

// Copy shown to evaluators; the distinction matters when weighing evidence.
export const EVIDENCE_KIND_LABELS: Record<string, string> = {
  supports_activity: 'Supports the activity (artifacts or first-hand observation)',
  indicates_absence: 'Evidence of absence (material shows the activity is not performed)',
  no_evidence_found: 'No evidence found (searched, nothing either way)',
  not_applicable_justification: 'Not applicable: justification',
};

export const FACET_LABELS: Record<string, string> = {
  regular: 'Regular (performed routinely)',
  systematic: 'Systematic (well-defined, company-wide policies)',
  trained_personnel: 'Trained personnel with clear roles',
  sufficiently_resourced: 'Sufficiently resourced (budget, time, tooling)',
  adaptive: 'Adaptive (reviews, contingency processes)',
  cross_functional: 'Cross-functional (core units and senior management involved)',
};

export const FACET_NOTICE =
  'Structured notes only: these checkboxes never set the robustness rating — you do.';
