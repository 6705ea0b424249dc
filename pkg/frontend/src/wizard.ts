// Assessment wizard: setup -> per-target entry -> evidence -> submit.
//
// Scores shown after submission always come from the server; the local badge
// is a preview. Drafts that fail the client-side mirror of the evidence rules
// never reach the server. Revision conflicts surface a reload-and-retry
// prompt instead of silently overwriting.

import { ApiClient, ApiError } from './api.js';
import type {
  EvidenceItem,
  EvidenceKind,
  Metrics,
  RatingLevel,
  Statement,
  SystemProfile,
  Topic,
} from './api.js';
import {
  EVIDENCE_KIND_LABELS,
  FACET_LABELS,
  FACET_NOTICE,
  previewScore,
  suggestCoverage,
  validateDraft,
} from './scoring.js';
import { Store, emptyDraft } from './store.js';
import { renderDashboard } from './dashboard.js';

const RATING_METRICS = ['coverage', 'robustness', 'input_diversity'] as const;
const RATING_LEVELS: RatingLevel[] = ['low', 'medium', 'high'];
const STAGE_OPTIONS: { value: string; label: string }[] = [
  { value: 'planning_and_design', label: 'Planning and design' },
  { value: 'building_and_data', label: 'Building and data' },
  { value: 'deployment', label: 'Deployment' },
];

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) node.setAttribute(key, value);
  if (text !== undefined) node.textContent = text;
  return node;
}

function option(label: string, value: string): HTMLOptionElement {
  const node = document.createElement('option');
  node.textContent = label;
  node.value = value;
  return node;
}

export class WizardApp {
  readonly store: Store;
  private root: HTMLElement;
  private client: ApiClient;

  constructor(root: HTMLElement, client: ApiClient, store = new Store()) {
    this.root = root;
    this.client = client;
    this.store = store;
  }

  mount(): void {
    this.render();
  }

  private render(): void {
    const state = this.store.get();
    this.root.innerHTML = '';
    if (state.screen === 'setup') {
      this.root.appendChild(this.renderSetup());
    } else if (state.screen === 'entry') {
      this.root.appendChild(this.renderEntry());
    } else {
      const container = el('section', { class: 'dashboard', id: 'dashboard' });
      this.root.appendChild(container);
      const assessment = state.assessment;
      if (assessment) {
        void renderDashboard(container, this.client, assessment);
      }
    }
  }

  // -- setup --------------------------------------------------------------

  private renderSetup(): HTMLElement {
    const section = el('section', { class: 'setup' });
    section.appendChild(el('h2', {}, 'New assessment'));

    const orgId = el('input', { id: 'org-id', placeholder: 'organization id' });
    const orgName = el('input', { id: 'org-name', placeholder: 'organization name' });
    const scope = el('select', { id: 'scope' });
    scope.append(
      option('Holistic (one answer set for the organization)', 'holistic'),
      option('Per system (answer for each AI system)', 'per_system'),
    );
    const granularity = el('select', { id: 'granularity' });
    granularity.append(
      option('Topic level (9 coarse statements)', 'topic'),
      option('Statement level (all 59 statements)', 'statement'),
    );

    const systemsBox = el('div', { id: 'systems' });
    const addSystemRow = () => {
      const row = el('div', { class: 'system-row' });
      row.appendChild(el('input', { class: 'system-id', placeholder: 'system id' }));
      row.appendChild(el('input', { class: 'system-name', placeholder: 'system name' }));
      const stage = el('select', { class: 'system-stage' });
      stage.append(...STAGE_OPTIONS.map((opt) => option(opt.label, opt.value)));
      row.appendChild(stage);
      systemsBox.appendChild(row);
    };
    addSystemRow();

    const addButton = el('button', { id: 'add-system', type: 'button' }, 'Add another system');
    addButton.addEventListener('click', addSystemRow);

    const error = el('p', { class: 'error', id: 'setup-error', hidden: '' });
    const start = el('button', { id: 'start-assessment', type: 'button' }, 'Start assessment');
    start.addEventListener('click', () => {
      void this.startAssessment(section, error);
    });

    for (const field of [orgId, orgName, scope, granularity, systemsBox, addButton, error, start]) {
      section.appendChild(field);
    }
    return section;
  }

  private async startAssessment(section: HTMLElement, error: HTMLElement): Promise<void> {
    const systems: SystemProfile[] = [];
    section.querySelectorAll('.system-row').forEach((row) => {
      const systemId = (row.querySelector('.system-id') as HTMLInputElement).value.trim();
      const name = (row.querySelector('.system-name') as HTMLInputElement).value.trim();
      const stage = (row.querySelector('.system-stage') as HTMLSelectElement).value;
      if (systemId) {
        systems.push({ system_id: systemId, name: name || systemId, stage: stage as never });
      }
    });
    const payload = {
      org_id: (section.querySelector('#org-id') as HTMLInputElement).value.trim(),
      org_name: (section.querySelector('#org-name') as HTMLInputElement).value.trim(),
      scope: (section.querySelector('#scope') as HTMLSelectElement).value as 'holistic' | 'per_system',
      granularity: (section.querySelector('#granularity') as HTMLSelectElement).value as
        | 'topic'
        | 'statement',
      systems,
    };
    try {
      const questionnaire = await this.client.questionnaire();
      const document_ = await this.client.createAssessment(payload);
      const completeness = await this.client.completeness(
        document_.assessment.assessment_id,
      );
      this.store.set({
        screen: 'entry',
        questionnaire,
        assessment: document_.assessment,
        revision: document_.revision,
        completeness,
        draft: emptyDraft(),
        error: null,
      });
      this.render();
    } catch (cause) {
      error.removeAttribute('hidden');
      error.textContent = cause instanceof ApiError ? `${cause.code}: ${cause.message}` : String(cause);
    }
  }

  // -- entry ----------------------------------------------------------------

  private applicableTargets(systemId: string | null): string[] {
    const state = this.store.get();
    const assessment = state.assessment;
    const questionnaire = state.questionnaire;
    if (!assessment || !questionnaire) return [];
    let stage: string;
    if (assessment.scope === 'per_system') {
      const system = assessment.systems.find((entry) => entry.system_id === systemId);
      if (!system) return [];
      stage = system.stage;
    } else {
      const order = ['planning_and_design', 'building_and_data', 'deployment'];
      stage = assessment.systems
        .map((entry) => entry.stage)
        .sort((a, b) => order.indexOf(a) - order.indexOf(b))
        .at(-1) as string;
    }
    const order = ['planning_and_design', 'building_and_data', 'deployment'];
    const topics = state.questionnaire!.topics.filter(
      (topic) => order.indexOf(topic.stage) <= order.indexOf(stage),
    );
    if (assessment.granularity === 'topic') {
      return topics.map((topic) => String(topic.id));
    }
    return topics.flatMap((topic) => (topic.statements ?? []).map((statement) => statement.id));
  }

  private targetCard(target: string): HTMLElement {
    const state = this.store.get();
    const questionnaire = state.questionnaire!;
    const card = el('div', { class: 'target-card', id: 'target-card' });
    if (/^[0-9]+$/.test(target)) {
      const topic = questionnaire.topics.find((entry) => entry.id === Number(target)) as Topic;
      card.appendChild(el('h3', {}, `Topic ${topic.id} — ${topic.name}`));
      card.appendChild(el('p', { class: 'target-text' }, topic.summary));
      card.appendChild(this.coverageChecklist(topic));
    } else {
      const topic = questionnaire.topics.find((entry) => entry.id === Number(target[0]))!;
      const statement = (topic.statements ?? []).find(
        (entry) => entry.id === target,
      ) as Statement;
      card.appendChild(el('h3', {}, `Statement ${statement.id}`));
      card.appendChild(el('p', { class: 'target-text' }, statement.text));
      const refs = el('p', { class: 'refs' });
      refs.textContent = `Refs: ${statement.rmf_refs.join(', ')}`;
      card.appendChild(refs);
    }
    return card;
  }

  private coverageChecklist(topic: Topic): HTMLElement {
    const box = el('div', { class: 'coverage-checklist', id: 'coverage-checklist' });
    box.appendChild(
      el(
        'p',
        { class: 'hint-copy' },
        'Tick the sub-statements this organization addresses; the suggestion below is a ' +
          'non-binding hint for the coverage rating.',
      ),
    );
    const hint = el('p', { class: 'coverage-hint', id: 'coverage-hint' }, '');
    box.appendChild(hint);
    const statements = topic.statements ?? [];
    const update = () => {
      const state = this.store.get();
      const covered = Object.values(state.draft.coverageChecklist).filter(Boolean).length;
      const applicable = statements.length;
      if (applicable > 0) {
        const suggested = suggestCoverage(covered, applicable);
        hint.textContent = `Suggested coverage rating: ${suggested} (${covered} of ${applicable} addressed)`;
        hint.setAttribute('data-suggestion', suggested);
      }
    };
    for (const statement of statements) {
      const row = el('label', { class: 'coverage-row' });
      const checkbox = el('input', {
        type: 'checkbox',
        class: 'coverage-box',
        'data-statement': statement.id,
      });
      checkbox.addEventListener('change', () => {
        const state = this.store.get();
        this.store.patchDraft({
          coverageChecklist: {
            ...state.draft.coverageChecklist,
            [statement.id]: (checkbox as HTMLInputElement).checked,
          },
        });
        update();
      });
      row.appendChild(checkbox);
      row.appendChild(el('span', {}, ` ${statement.id}: ${statement.emphasis || statement.text}`));
      box.appendChild(row);
    }
    update();
    return box;
  }

  private renderEntry(): HTMLElement {
    const state = this.store.get();
    const assessment = state.assessment!;
    const section = el('section', { class: 'entry' });
    const heading = el('h2', {}, `Assessment ${assessment.assessment_id}`);
    section.appendChild(heading);
    section.appendChild(
      el(
        'p',
        { id: 'session-meta' },
        `${assessment.organization.name} — scope ${assessment.scope}, ` +
          `granularity ${assessment.granularity}, revision ${state.revision}`,
      ),
    );
    const completeness = el('p', { id: 'completeness' }, this.completenessLine());
    section.appendChild(completeness);

    // system picker (per-system scope only)
    let systemSelect: HTMLSelectElement | null = null;
    if (assessment.scope === 'per_system') {
      systemSelect = el('select', { id: 'system-picker' });
      systemSelect.append(
        ...assessment.systems.map(
          (system) => option(`${system.name} (${system.stage})`, system.system_id),
        ),
      );
      section.appendChild(el('label', { for: 'system-picker' }, 'System'));
      section.appendChild(systemSelect);
    }

    const targetSelect = el('select', { id: 'target-picker' });
    const cardSlot = el('div', { id: 'card-slot' });
    const refreshTargets = () => {
      const systemId = systemSelect ? systemSelect.value : null;
      const targets = this.applicableTargets(systemId);
      targetSelect.innerHTML = '';
      targetSelect.append(...targets.map((target) => option(target, target)));
      this.store.patchDraft({
        ...emptyDraft(),
        target: targets[0] ?? null,
        systemId,
      });
      cardSlot.innerHTML = '';
      if (targets[0]) cardSlot.appendChild(this.targetCard(targets[0]));
      this.syncBadge(section);
    };
    targetSelect.addEventListener('change', () => {
      const systemId = systemSelect ? systemSelect.value : null;
      this.store.patchDraft({
        ...emptyDraft(),
        target: targetSelect.value,
        systemId,
      });
      cardSlot.innerHTML = '';
      cardSlot.appendChild(this.targetCard(targetSelect.value));
      this.syncBadge(section);
      this.resetEntryInputs(section);
    });
    if (systemSelect) {
      systemSelect.addEventListener('change', () => {
        refreshTargets();
        this.resetEntryInputs(section);
      });
    }

    section.appendChild(el('label', { for: 'target-picker' }, 'Target'));
    section.appendChild(targetSelect);
    section.appendChild(cardSlot);

    // not-applicable toggle
    const naRow = el('label', { class: 'na-row' });
    const naBox = el('input', { type: 'checkbox', id: 'na-toggle' });
    naBox.addEventListener('change', () => {
      this.store.patchDraft({ na: (naBox as HTMLInputElement).checked });
      const metricsBox = section.querySelector('#metrics-box') as HTMLElement;
      if ((naBox as HTMLInputElement).checked) metricsBox.setAttribute('hidden', '');
      else metricsBox.removeAttribute('hidden');
      this.syncBadge(section);
    });
    naRow.appendChild(naBox);
    naRow.appendChild(
      el('span', {}, ' Mark this target not applicable (requires a justification evidence item)'),
    );
    section.appendChild(naRow);

    // metric rating pickers
    const metricsBox = el('div', { id: 'metrics-box' });
    for (const metric of RATING_METRICS) {
      const group = el('fieldset', { class: 'rating-group', id: `rating-${metric}` });
      group.appendChild(el('legend', {}, metric.replace('_', ' ')));
      for (const level of RATING_LEVELS) {
        const label = el('label', { class: 'rating-option' });
        const radio = el('input', {
          type: 'radio',
          name: `rating-${metric}`,
          value: level,
          'data-metric': metric,
        });
        radio.addEventListener('change', () => {
          const draft = this.store.get().draft;
          this.store.patchDraft({ metrics: { ...draft.metrics, [metric]: level } });
          this.syncBadge(section);
        });
        label.appendChild(radio);
        label.appendChild(el('span', {}, ` ${level}`));
        group.appendChild(label);
      }
      metricsBox.appendChild(group);
    }

    // robustness facets: structured notes, never the rating
    const facets = el('fieldset', { id: 'facets' });
    facets.appendChild(el('legend', {}, 'Robustness facets observed'));
    facets.appendChild(el('p', { class: 'facet-notice' }, FACET_NOTICE));
    for (const [facet, label] of Object.entries(FACET_LABELS)) {
      const row = el('label', { class: 'facet-row' });
      const box = el('input', { type: 'checkbox', class: 'facet-box', 'data-facet': facet });
      box.addEventListener('change', () => {
        const draft = this.store.get().draft;
        this.store.patchDraft({
          facets: { ...draft.facets, [facet]: (box as HTMLInputElement).checked },
        });
      });
      row.appendChild(box);
      row.appendChild(el('span', {}, ` ${label}`));
      facets.appendChild(row);
    }
    metricsBox.appendChild(facets);
    section.appendChild(metricsBox);

    // evidence editor
    const evidenceBox = el('div', { id: 'evidence-box' });
    evidenceBox.appendChild(el('h3', {}, 'Evidence'));
    const rows = el('div', { id: 'evidence-rows' });
    evidenceBox.appendChild(rows);
    const addEvidence = el('button', { id: 'add-evidence', type: 'button' }, 'Add evidence item');
    addEvidence.addEventListener('click', () => {
      this.addEvidenceRow(rows, section);
    });
    evidenceBox.appendChild(addEvidence);
    section.appendChild(evidenceBox);

    const note = el('textarea', { id: 'note', placeholder: 'rationale / notes' });
    note.addEventListener('input', () => {
      this.store.patchDraft({ note: (note as HTMLTextAreaElement).value });
    });
    section.appendChild(note);

    // live preview + validation + submit
    const badge = el('p', { id: 'score-badge', class: 'score-badge' }, 'Score preview: —');
    section.appendChild(badge);
    section.appendChild(
      el(
        'p',
        { class: 'badge-copy' },
        'Preview only; the recorded score is computed and returned by the server.',
      ),
    );
    const problems = el('ul', { id: 'problems', class: 'problems' });
    section.appendChild(problems);
    const errorLine = el('p', { id: 'entry-error', class: 'error', hidden: '' });
    section.appendChild(errorLine);

    const submit = el('button', { id: 'submit-response', type: 'button' }, 'Submit response');
    submit.addEventListener('click', () => {
      void this.submitDraft(section);
    });
    section.appendChild(submit);

    const conflictBox = el('div', { id: 'conflict-box', hidden: '' });
    conflictBox.appendChild(
      el(
        'p',
        {},
        'Someone else updated this assessment. Reload the latest revision and retry your entry.',
      ),
    );
    const reload = el('button', { id: 'reload-retry', type: 'button' }, 'Reload and retry');
    reload.addEventListener('click', () => {
      void this.reloadAndRetry(section);
    });
    conflictBox.appendChild(reload);
    section.appendChild(conflictBox);

    const toDashboard = el('button', { id: 'open-dashboard', type: 'button' }, 'Open dashboard');
    toDashboard.addEventListener('click', () => {
      this.store.set({ screen: 'dashboard' });
      this.render();
    });
    section.appendChild(toDashboard);

    refreshTargets();
    this.syncBadge(section);
    return section;
  }

  private addEvidenceRow(rows: HTMLElement, section: HTMLElement): void {
    const index = rows.children.length;
    const row = el('div', { class: 'evidence-row', 'data-index': String(index) });
    const kind = el('select', { class: 'evidence-kind' });
    kind.append(
      ...Object.entries(EVIDENCE_KIND_LABELS).map(([value, label]) => option(label, value)),
    );
    const description = el('input', { class: 'evidence-description', placeholder: 'what was observed' });
    const sources = el('input', {
      class: 'evidence-sources',
      placeholder: 'sources, semicolon-separated (document name, URL, or "first-hand")',
    });
    const sync = () => {
      this.syncEvidenceDraft(rows);
      this.syncBadge(section);
    };
    kind.addEventListener('change', sync);
    description.addEventListener('input', sync);
    sources.addEventListener('input', sync);
    row.appendChild(kind);
    row.appendChild(description);
    row.appendChild(sources);
    rows.appendChild(row);
    sync();
  }

  private syncEvidenceDraft(rows: HTMLElement): void {
    const evidence: EvidenceItem[] = [];
    rows.querySelectorAll('.evidence-row').forEach((row) => {
      const kind = (row.querySelector('.evidence-kind') as HTMLSelectElement).value as EvidenceKind;
      const description = (row.querySelector('.evidence-description') as HTMLInputElement).value;
      const rawSources = (row.querySelector('.evidence-sources') as HTMLInputElement).value;
      const sources = rawSources
        .split(';')
        .map((entry) => entry.trim())
        .filter((entry) => entry.length > 0);
      evidence.push({ kind, description, ...(sources.length ? { sources } : {}) });
    });
    this.store.patchDraft({ evidence });
  }

  private resetEntryInputs(section: HTMLElement): void {
    section.querySelectorAll<HTMLInputElement>('input[type=radio]').forEach((radio) => {
      radio.checked = false;
    });
    section
      .querySelectorAll<HTMLInputElement>('.facet-box, #na-toggle')
      .forEach((box) => {
        box.checked = false;
      });
    const rows = section.querySelector('#evidence-rows') as HTMLElement;
    rows.innerHTML = '';
    (section.querySelector('#note') as HTMLTextAreaElement).value = '';
    (section.querySelector('#metrics-box') as HTMLElement).removeAttribute('hidden');
    this.syncBadge(section);
  }

  private syncBadge(section: HTMLElement): void {
    const state = this.store.get();
    const badge = section.querySelector('#score-badge');
    const problems = section.querySelector('#problems');
    const submit = section.querySelector('#submit-response') as HTMLButtonElement | null;
    if (!badge || !problems || !submit) return;
    const draft = state.draft;
    if (draft.na) {
      badge.textContent = 'Score preview: n/a';
    } else if (draft.metrics.coverage && draft.metrics.robustness && draft.metrics.input_diversity) {
      badge.textContent = `Score preview: ${previewScore(draft.metrics as Metrics)}`;
    } else {
      badge.textContent = 'Score preview: —';
    }
    const report = validateDraft(draft);
    problems.innerHTML = '';
    for (const problem of report.problems) {
      const item = document.createElement('li');
      item.textContent = problem;
      problems.appendChild(item);
    }
    submit.disabled = !report.ok;
  }

  private completenessLine(): string {
    const completeness = this.store.get().completeness;
    if (!completeness) return 'Completeness: —';
    return `Completeness: ${completeness.answered} of ${completeness.total} targets answered`;
  }

  private async refreshCompleteness(): Promise<void> {
    const assessment = this.store.get().assessment;
    if (!assessment) return;
    const completeness = await this.client.completeness(assessment.assessment_id);
    this.store.set({ completeness });
  }

  private draftBody(): {
    expected_revision: number;
    metrics?: Metrics;
    na?: boolean;
    evidence: EvidenceItem[];
    note?: string;
  } {
    const state = this.store.get();
    const draft = state.draft;
    const body: ReturnType<WizardApp['draftBody']> = {
      expected_revision: state.revision,
      evidence: draft.evidence,
      note: draft.note,
    };
    if (draft.na) {
      body.na = true;
    } else {
      const metrics: Metrics = {
        coverage: draft.metrics.coverage as RatingLevel,
        robustness: draft.metrics.robustness as RatingLevel,
        input_diversity: draft.metrics.input_diversity as RatingLevel,
      };
      const checked = Object.fromEntries(
        Object.entries(draft.facets).filter(([, on]) => on),
      );
      if (Object.keys(checked).length > 0) metrics.robustness_facets = checked;
      body.metrics = metrics;
    }
    return body;
  }

  private async submitDraft(section: HTMLElement): Promise<void> {
    const state = this.store.get();
    const draft = state.draft;
    const errorLine = section.querySelector('#entry-error') as HTMLElement;
    const conflictBox = section.querySelector('#conflict-box') as HTMLElement;
    errorLine.setAttribute('hidden', '');
    conflictBox.setAttribute('hidden', '');
    const report = validateDraft(draft);
    if (!report.ok || !draft.target) {
      errorLine.removeAttribute('hidden');
      errorLine.textContent = report.problems.join(' ') || 'Pick a target first.';
      return;
    }
    const assessment = state.assessment!;
    try {
      const result = await this.client.putResponse(
        assessment.assessment_id,
        draft.target,
        this.draftBody(),
        assessment.scope === 'per_system' ? draft.systemId ?? undefined : undefined,
      );
      this.store.set({
        revision: result.revision,
        lastServerScore: result.response.score,
        conflict: false,
        error: null,
      });
      await this.refreshCompleteness();
      const meta = section.querySelector('#session-meta');
      if (meta) {
        meta.textContent =
          `${assessment.organization.name} — scope ${assessment.scope}, ` +
          `granularity ${assessment.granularity}, revision ${result.revision}`;
      }
      const completeness = section.querySelector('#completeness');
      if (completeness) completeness.textContent = this.completenessLine();
      const badge = section.querySelector('#score-badge');
      if (badge) badge.textContent = `Recorded score (server): ${result.response.score}`;
    } catch (cause) {
      if (cause instanceof ApiError && cause.code === 'REVISION_CONFLICT') {
        this.store.set({ conflict: true });
        conflictBox.removeAttribute('hidden');
        return;
      }
      errorLine.removeAttribute('hidden');
      errorLine.textContent =
        cause instanceof ApiError ? `${cause.code}: ${cause.message}` : String(cause);
    }
  }

  private async reloadAndRetry(section: HTMLElement): Promise<void> {
    const assessment = this.store.get().assessment;
    if (!assessment) return;
    const fresh = await this.client.getAssessment(assessment.assessment_id);
    this.store.set({
      assessment: fresh.assessment,
      revision: fresh.revision,
      conflict: false,
    });
    const meta = section.querySelector('#session-meta');
    if (meta) {
      meta.textContent =
        `${fresh.assessment.organization.name} — scope ${fresh.assessment.scope}, ` +
        `granularity ${fresh.assessment.granularity}, revision ${fresh.revision}`;
    }
    await this.submitDraft(section);
  }
}
