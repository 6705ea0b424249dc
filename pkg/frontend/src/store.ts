// Minimal observable store shared by the wizard and dashboard views.

import type {
  AssessmentBody,
  Completeness,
  EvidenceItem,
  Questionnaire,
  RatingLevel,
  RobustnessFacets,
} from './api.js';

export interface Draft {
  target: string | null;
  systemId: string | null;
  na: boolean;
  metrics: Partial<Record<'coverage' | 'robustness' | 'input_diversity', RatingLevel>>;
  facets: RobustnessFacets;
  evidence: EvidenceItem[];
  note: string;
  coverageChecklist: Record<string, boolean>;
}

export interface WizardState {
  screen: 'setup' | 'entry' | 'dashboard';
  questionnaire: Questionnaire | null;
  assessment: AssessmentBody | null;
  revision: number;
  completeness: Completeness | null;
  draft: Draft;
  error: string | null;
  conflict: boolean;
  lastServerScore: number | 'n/a' | null;
}

export function emptyDraft(): Draft {
  return {
    target: null,
    systemId: null,
    na: false,
    metrics: {},
    facets: {},
    evidence: [],
    note: '',
    coverageChecklist: {},
  };
}

export function initialState(): WizardState {
  return {
    screen: 'setup',
    questionnaire: null,
    assessment: null,
    revision: 0,
    completeness: null,
    draft: emptyDraft(),
    error: null,
    conflict: false,
    lastServerScore: null,
  };
}

type Listener = (state: WizardState) => void;

export class Store {
  private state: WizardState = initialState();
  private listeners: Listener[] = [];

  get(): WizardState {
    return this.state;
  }

  set(patch: Partial<WizardState>): void {
    this.state = { ...this.state, ...patch };
    for (const listener of this.listeners) listener(this.state);
  }

  patchDraft(patch: Partial<Draft>): void {
    this.set({ draft: { ...this.state.draft, ...patch } });
  }

  subscribe(listener: Listener): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((entry) => entry !== listener);
    };
  }
}
