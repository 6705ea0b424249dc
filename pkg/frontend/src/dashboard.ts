// Results dashboard: pillar radar (fixed 4-axis order), dimension radar or
// the explanatory notice when the assessment was scored at topic level,
// diagnostic flag cards, per-system comparison, and the organization's
// trajectory over time.

import { ApiClient, ApiError } from './api.js';
import type { AssessmentBody, ChartData, PillarAxis, TrajectoryPoint } from './api.js';
import { renderRadar, renderTrend } from './radar.js';

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

function axesToRadar(axes: PillarAxis[]) {
  return axes.map((axis) => ({
    label: axis.pillar,
    value: axis.average === null ? null : Number(axis.average),
  }));
}

export function renderChartData(container: HTMLElement, chart: ChartData): void {
  const pillarBlock = el('div', { id: 'pillar-block', class: 'chart-block' });
  pillarBlock.appendChild(el('h3', {}, 'Maturity by pillar'));
  pillarBlock.appendChild(renderRadar(axesToRadar(chart.pillar_axes), 'Maturity by pillar'));
  if (chart.pillar_overall !== null) {
    pillarBlock.appendChild(
      el('p', { class: 'overall' }, `Overall average (reporting convention): ${chart.pillar_overall}`),
    );
  }
  container.appendChild(pillarBlock);

  const dimensionBlock = el('div', { id: 'dimension-block', class: 'chart-block' });
  dimensionBlock.appendChild(el('h3', {}, 'Maturity by responsibility dimension'));
  if (chart.dimension_axes !== null) {
    dimensionBlock.appendChild(
      renderRadar(
        chart.dimension_axes.map((axis) => ({
          label: axis.dimension,
          value: axis.average === null ? null : Number(axis.average),
        })),
        'Maturity by responsibility dimension',
      ),
    );
  } else {
    dimensionBlock.appendChild(
      el(
        'p',
        { id: 'dimension-unavailable', class: 'notice' },
        chart.dimension_axes_unavailable_reason ??
          'Dimension aggregation needs statement-level scores.',
      ),
    );
  }
  container.appendChild(dimensionBlock);

  const diagnostics = el('div', { id: 'diagnostics-block', class: 'chart-block' });
  diagnostics.appendChild(el('h3', {}, 'Diagnostics'));
  if (chart.diagnostics.length === 0) {
    diagnostics.appendChild(el('p', { class: 'notice' }, 'No diagnostic patterns detected.'));
  }
  for (const flag of chart.diagnostics) {
    const card = el('div', { class: 'flag-card', 'data-kind': flag.kind });
    const title =
      flag.kind === 'ethics_washing_pattern'
        ? 'Ethics-washing pattern'
        : 'Ill-informed risk management';
    card.appendChild(el('h4', {}, title));
    card.appendChild(el('p', {}, flag.rationale));
    card.appendChild(
      el(
        'p',
        { class: 'thresholds' },
        `Thresholds: strength ≥ ${flag.thresholds.high}, weakness ≤ ${flag.thresholds.low}`,
      ),
    );
    diagnostics.appendChild(card);
  }
  container.appendChild(diagnostics);

  if (chart.per_system !== null) {
    const perSystem = el('div', { id: 'per-system-block', class: 'chart-block' });
    perSystem.appendChild(el('h3', {}, 'Per-system comparison'));
    for (const [systemId, axes] of Object.entries(chart.per_system)) {
      const panel = el('div', { class: 'system-panel', 'data-system': systemId });
      panel.appendChild(el('h4', {}, `System ${systemId}`));
      panel.appendChild(renderRadar(axesToRadar(axes), `Maturity by pillar — ${systemId}`));
      perSystem.appendChild(panel);
    }
    container.appendChild(perSystem);
  }
}

export function renderTrajectory(container: HTMLElement, points: TrajectoryPoint[]): void {
  const block = el('div', { id: 'trajectory-block', class: 'chart-block' });
  block.appendChild(el('h3', {}, 'Trajectory'));
  if (points.length === 0) {
    block.appendChild(el('p', { class: 'notice' }, 'No data'));
    container.appendChild(block);
    return;
  }
  const labels = points.map((point) => point.as_of);
  const pillars = ['MAP', 'MEASURE', 'MANAGE', 'GOVERN'];
  const series = pillars.map((pillar) => ({
    label: pillar,
    points: points.map((point, index) => {
      const axis = point.pillar_scores.axes.find((entry) => entry.pillar === pillar);
      return { x: index, value: axis && axis.average !== null ? Number(axis.average) : null };
    }),
  }));
  block.appendChild(renderTrend(series, labels));
  if (points.some((point) => point.version_mismatch)) {
    block.appendChild(
      el(
        'p',
        { class: 'notice' },
        'Some points were answered against a different questionnaire version.',
      ),
    );
  }
  container.appendChild(block);
}

export async function renderDashboard(
  container: HTMLElement,
  client: ApiClient,
  assessment: AssessmentBody,
): Promise<void> {
  container.innerHTML = '';
  container.appendChild(el('h2', {}, `Results — ${assessment.organization.name}`));
  try {
    const { chart_data } = await client.report(assessment.assessment_id);
    renderChartData(container, chart_data);
  } catch (cause) {
    container.appendChild(
      el(
        'p',
        { class: 'notice', id: 'dashboard-empty' },
        cause instanceof ApiError ? `No data yet: ${cause.message}` : String(cause),
      ),
    );
  }
  try {
    const { points } = await client.trajectory(assessment.organization.org_id);
    renderTrajectory(container, points);
  } catch {
    renderTrajectory(container, []);
  }
}
