// Typed client for the assessment engine's HTTP API. The UI talks to the
// server exclusively through this module; it never touches the store.

export type Stage = 'planning_and_design' | 'building_and_data' | 'deployment';
export type Scope = 'holistic' | 'per_system';
export type Granularity = 'topic' | 'statement';
export type RatingLevel = 'low' | 'medium' | 'high';

export type EvidenceKind =
  | 'supports_activity'
  | 'indicates_absence'
  | 'no_evidence_found'
  | 'not_applicable_justification';

export interface EvidenceItem {
  kind: EvidenceKind;
  description: string;
  sources?: string[];
}

export interface RobustnessFacets {
  regular?: boolean;
  systematic?: boolean;
  trained_personnel?: boolean;
  sufficiently_resourced?: boolean;
  adaptive?: boolean;
  cross_functional?: boolean;
}

export interface Metrics {
  coverage: RatingLevel;
  robustness: RatingLevel;
  input_diversity: RatingLevel;
  robustness_facets?: RobustnessFacets;
}

export interface Statement {
  id: string;
  text: string;
  emphasis: string;
  rmf_refs: string[];
  pillars: string[];
  dimensions: string[];
}

export interface Topic {
  id: number;
  name: string;
  summary: string;
  stage: Stage;
  statement_count: number;
  statements?: Statement[];
}

export interface Questionnaire {
  version: string;
  topic_count: number;
  statement_count: number;
  topics: Topic[];
}

export interface SystemProfile {
  system_id: string;
  name: string;
  stage: Stage;
  description?: string;
}

export interface ResponseRecord {
  target: string;
  system_id: string | null;
  metrics: Metrics | 'n/a';
  score: number | 'n/a';
  evidence: EvidenceItem[];
  note: string;
  recorded_at: string;
}

export interface AssessmentBody {
  assessment_id: string;
  organization: { org_id: string; name: string };
  questionnaire_version: string;
  scope: Scope;
  granularity: Granularity;
  systems: SystemProfile[];
  responses: ResponseRecord[];
  revision: number;
  created_at: string;
  updated_at: string;
  as_of: string | null;
}

export interface DocumentPayload {
  revision: number;
  checksum: string;
  saved_at: string;
  assessment: AssessmentBody;
}

export interface Completeness {
  overall: string | null;
  answered: number;
  total: number;
  unanswered: { target: string; system_id: string | null }[];
  per_system: Record<string, string>;
}

export interface PillarAxis {
  pillar: string;
  average: string | null;
  contributors: number;
  not_applicable: number;
}

export interface DimensionAxis {
  dimension: string;
  average: string | null;
  contributors: number;
  not_applicable: number;
}

export interface DiagnosticFlag {
  kind: string;
  rationale: string;
  thresholds: { high: string; low: string };
}

export interface ChartData {
  pillar_axes: PillarAxis[];
  pillar_overall: string | null;
  dimension_axes: DimensionAxis[] | null;
  dimension_axes_unavailable_reason: string | null;
  per_system: Record<string, PillarAxis[]> | null;
  diagnostics: DiagnosticFlag[];
  completeness: { overall: string | null; answered: number; total: number };
}

export interface TrajectoryPoint {
  assessment_id: string;
  as_of: string;
  questionnaire_version: string;
  version_mismatch: boolean;
  pillar_scores: { axes: PillarAxis[]; overall: string | null };
}

export class ApiError extends Error {
  constructor(
    readonly code: string,
    message: string,
    readonly ids: string[] = [],
    readonly status = 0,
  ) {
    super(message);
  }
}

async function request<T>(base: string, path: string, init?: RequestInit): Promise<T> {
  const response = await fetch(`${base}${path}`, {
    headers: { 'content-type': 'application/json' },
    ...init,
  });
  const body = await response.json().catch(() => ({}));
  if (!response.ok) {
    throw new ApiError(
      body.code ?? 'HTTP_ERROR',
      body.message ?? `request failed with status ${response.status}`,
      body.ids ?? [],
      response.status,
    );
  }
  return body as T;
}

export class ApiClient {
  constructor(readonly base = '') {}

  questionnaire(stage?: string): Promise<Questionnaire> {
    const query = stage ? `?stage=${encodeURIComponent(stage)}` : '';
    return request(this.base, `/api/questionnaire${query}`);
  }

  createAssessment(payload: {
    org_id: string;
    org_name: string;
    scope: Scope;
    granularity: Granularity;
    systems: SystemProfile[];
    assessment_id?: string;
  }): Promise<DocumentPayload> {
    return request(this.base, '/api/assessments', {
      method: 'POST',
      body: JSON.stringify(payload),
    });
  }

  getAssessment(id: string): Promise<DocumentPayload> {
    return request(this.base, `/api/assessments/${encodeURIComponent(id)}`);
  }

  targets(id: string, system?: string): Promise<{ targets?: string[]; per_system?: Record<string, string[]> }> {
    const query = system ? `?system=${encodeURIComponent(system)}` : '';
    return request(this.base, `/api/assessments/${encodeURIComponent(id)}/targets${query}`);
  }

  putResponse(
    id: string,
    target: string,
    body: {
      expected_revision: number;
      metrics?: Metrics;
      na?: boolean;
      evidence: EvidenceItem[];
      note?: string;
    },
    system?: string,
  ): Promise<{ revision: number; replayed: boolean; response: ResponseRecord }> {
    const query = system ? `?system=${encodeURIComponent(system)}` : '';
    return request(
      this.base,
      `/api/assessments/${encodeURIComponent(id)}/responses/${encodeURIComponent(target)}${query}`,
      { method: 'PUT', body: JSON.stringify(body) },
    );
  }

  completeness(id: string): Promise<Completeness> {
    return request(this.base, `/api/assessments/${encodeURIComponent(id)}/completeness`);
  }

  report(id: string): Promise<{ markdown: string; chart_data: ChartData }> {
    return request(this.base, `/api/assessments/${encodeURIComponent(id)}/report`);
  }

  trajectory(orgId: string): Promise<{ org_id: string; points: TrajectoryPoint[] }> {
    return request(this.base, `/api/organizations/${encodeURIComponent(orgId)}/trajectory`);
  }
}
