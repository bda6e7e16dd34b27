// Query view: station selector, filter fields, custom tag picker, results tree.

import { ApiError, GatewayClient } from '../api';
import { ActionStateStore, nodeKey, pollJob } from '../state';
import type {
  CustomField,
  JobDoc,
  QueryRequest,
  SeriesDoc,
  StationStatus,
  StudyDoc,
  TreeDoc,
} from '../types';
import { createPreviewDialog } from './preview';
import { createTreeView, TreeViewInstance } from './tree';

const FILTER_GROUPS: [string, [keyof QueryRequest, string][]][] = [
  ['Study', [
    ['study_date', 'Study Date (YYYYMMDD or range)'],
    ['study_time', 'Study Time'],
    ['study_id', 'Study ID'],
    ['referring_physician_name', "Referring Physician's Name"],
    ['accession_number', 'Accession Number'],
    ['study_instance_uid', 'Study Instance UID'],
  ]],
  ['Patient', [
    ['patient_id', 'Patient ID'],
    ['patient_name', 'Patient Name'],
    ['sex', 'Sex'],
    ['birth_date', 'Birth Date'],
  ]],
  ['Series', [
    ['modality', 'Modality'],
    ['series_instance_uid', 'Series Instance UID'],
    ['series_number', 'Series Number'],
  ]],
];

export interface QueryViewDeps {
  client: GatewayClient;
  store: ActionStateStore;
  onAuthExpired: () => void;
  pollIntervalMs?: number;
}

export function createQueryView(deps: QueryViewDeps): { el: HTMLElement; destroy(): void } {
  const { client, store } = deps;
  const el = document.createElement('section');
  el.className = 'query-view';

  const banner = document.createElement('div');
  banner.className = 'banner hidden';
  el.appendChild(banner);

  const form = document.createElement('form');
  form.className = 'query-form';
  el.appendChild(form);

  // Station selector, populated by the verification pass on open.
  const stationRow = document.createElement('div');
  stationRow.className = 'station-row';
  const stationLabel = document.createElement('label');
  stationLabel.textContent = 'Station';
  const stationSelect = document.createElement('select');
  stationSelect.name = 'station';
  stationLabel.appendChild(stationSelect);
  stationRow.appendChild(stationLabel);
  form.appendChild(stationRow);

  const inputs = new Map<string, HTMLInputElement>();
  for (const [group, fields] of FILTER_GROUPS) {
    const fieldset = document.createElement('fieldset');
    const legend = document.createElement('legend');
    legend.textContent = group;
    fieldset.appendChild(legend);
    for (const [name, label] of fields) {
      const wrap = document.createElement('label');
      wrap.textContent = label;
      const input = document.createElement('input');
      input.name = name;
      wrap.appendChild(input);
      fieldset.appendChild(wrap);
      inputs.set(name, input);
    }
    form.appendChild(fieldset);
  }

  // Custom field row with a dictionary-backed keyword picker.
  const customSet = document.createElement('fieldset');
  const customLegend = document.createElement('legend');
  customLegend.textContent = 'Custom field';
  customSet.appendChild(customLegend);
  const tagInput = document.createElement('input');
  tagInput.name = 'custom_tag';
  tagInput.placeholder = 'attribute keyword or GGGG,EEEE';
  tagInput.setAttribute('list', 'dict-keywords');
  const datalist = document.createElement('datalist');
  datalist.id = 'dict-keywords';
  const valueInput = document.createElement('input');
  valueInput.name = 'custom_value';
  valueInput.placeholder = 'value';
  customSet.append(tagInput, datalist, valueInput);
  form.appendChild(customSet);

  tagInput.addEventListener('input', () => {
    const text = tagInput.value.trim();
    if (text.length < 2) return;
    client.dictionary(text).then((result) => {
      datalist.innerHTML = '';
      for (const entry of result.entries) {
        const option = document.createElement('option');
        option.value = entry.keyword;
        option.label = `${entry.tag} ${entry.vr}`;
        datalist.appendChild(option);
      }
    }).catch(() => { /* suggestions are best-effort */ });
  });

  const searchButton = document.createElement('button');
  searchButton.type = 'submit';
  searchButton.textContent = 'Search';
  form.appendChild(searchButton);

  const jobsStrip = document.createElement('div');
  jobsStrip.className = 'jobs-strip';
  el.appendChild(jobsStrip);

  const results = document.createElement('div');
  results.className = 'results';
  el.appendChild(results);

  let treeView: TreeViewInstance | null = null;
  let latestQuery = 0;

  function fail(error: unknown): void {
    if (error instanceof ApiError && error.status === 401) {
      deps.onAuthExpired();
      return;
    }
    banner.classList.remove('hidden');
    banner.textContent = error instanceof Error ? error.message : String(error);
    const retry = document.createElement('button');
    retry.textContent = 'retry';
    retry.addEventListener('click', () => {
      banner.classList.add('hidden');
      void verifyStations();
    });
    banner.appendChild(retry);
  }

  async function verifyStations(): Promise<void> {
    let statuses: StationStatus[];
    try {
      statuses = (await client.verifyStations('all')).statuses;
    } catch (error) {
      fail(error);
      return;
    }
    stationSelect.innerHTML = '';
    if (statuses.length === 0) {
      results.innerHTML = '';
      const hint = document.createElement('p');
      hint.className = 'empty-state';
      hint.innerHTML = 'no stations configured — <a href="#/settings">add one in Settings</a>';
      results.appendChild(hint);
      return;
    }
    const all = document.createElement('option');
    all.value = 'all';
    all.textContent = 'All stations';
    stationSelect.appendChild(all);
    for (const status of statuses) {
      const option = document.createElement('option');
      option.value = status.station.name;
      option.disabled = !status.reachable;
      option.textContent = status.reachable
        ? status.station.name
        : `${status.station.name} (unreachable)`;
      stationSelect.appendChild(option);
    }
  }

  function collectRequest(): QueryRequest {
    const request: QueryRequest = { station: stationSelect.value || 'all' };
    for (const [name, input] of inputs) {
      const value = input.value.trim();
      if (value) (request as unknown as Record<string, string>)[name] = value;
    }
    const custom: CustomField[] = [];
    if (tagInput.value.trim() && valueInput.value.trim()) {
      custom.push({ tag: tagInput.value.trim(), value: valueInput.value.trim() });
    }
    if (custom.length) request.custom = custom;
    return request;
  }

  async function runQuery(): Promise<void> {
    const marker = ++latestQuery;
    let tree: TreeDoc;
    try {
      tree = await client.query(collectRequest());
    } catch (error) {
      fail(error);
      return;
    }
    if (marker !== latestQuery) return; // a newer query superseded this one
    store.seed(tree);
    treeView?.destroy();
    treeView = createTreeView({
      tree,
      store,
      onRetrieve: (study, series) => void runRetrieve(study, series),
      onPreview: (study, series) => void openPreview(study, series),
      onOpen: (study, series) => void openPath(study, series),
    });
    results.innerHTML = '';
    results.appendChild(treeView.el);
  }

  form.addEventListener('submit', (event) => {
    event.preventDefault();
    void runQuery();
  });

  async function runRetrieve(study: StudyDoc, series?: SeriesDoc): Promise<void> {
    const key = nodeKey(study.station.name, study.study_instance_uid,
                        series?.series_instance_uid);
    store.retrieveStarted(key);
    const progress = document.createElement('div');
    progress.className = 'job-progress';
    const text = document.createElement('span');
    const bar = document.createElement('progress');
    progress.append(text, bar);
    jobsStrip.appendChild(progress);

    const label = series ? `series ${series.series_instance_uid}`
                         : `study ${study.study_instance_uid}`;
    try {
      const { job_id } = await client.retrieve({
        scope: series ? 'series' : 'study',
        station: study.station.name,
        study_uid: study.study_instance_uid,
        series_uid: series?.series_instance_uid,
      });
      const job = await pollJob(client, job_id, {
        intervalMs: deps.pollIntervalMs ?? 1000,
        onUpdate: (update: JobDoc) => {
          text.textContent =
            `${label}: ${update.progress.completed} / ${update.progress.expected}`;
          bar.max = Math.max(update.progress.expected, 1);
          bar.value = update.progress.completed;
        },
      });
      if (job.state === 'completed') {
        const seriesKeys = (job.report?.per_series ?? []).map((entry) =>
          nodeKey(study.station.name, study.study_instance_uid, entry.series_uid));
        store.retrieveSucceeded(key, seriesKeys);
        text.textContent = `${label}: completed`;
      } else {
        store.retrieveFailed(key);
        text.textContent = `${label}: failed`
          + (job.report?.error ? ` (${job.report.error})` : '');
      }
    } catch (error) {
      store.retrieveFailed(key);
      text.textContent = `${label}: ${error instanceof Error ? error.message : error}`;
    }
    setTimeout(() => progress.remove(), 15_000);
  }

  async function openPreview(study: StudyDoc, series?: SeriesDoc): Promise<void> {
    try {
      const manifests = series
        ? [await client.seriesPreviews(study.study_instance_uid,
                                       series.series_instance_uid)]
        : (await client.studyPreviews(study.study_instance_uid)).series;
      const dialog = createPreviewDialog({
        manifests,
        imageUrl: (seriesUid, name) =>
          client.imageUrl(study.study_instance_uid, seriesUid, name),
      });
      document.body.appendChild(dialog.el);
    } catch (error) {
      fail(error);
    }
  }

  async function openPath(study: StudyDoc, series?: SeriesDoc): Promise<void> {
    // A browser cannot open server-side folders; show the path to copy.
    try {
      const preferences = await client.getPreferences();
      const path = [preferences.output_root, study.study_instance_uid,
                    series?.series_instance_uid].filter(Boolean).join('/');
      const overlay = document.createElement('div');
      overlay.className = 'path-overlay';
      const box = document.createElement('div');
      box.className = 'path-box';
      const code = document.createElement('code');
      code.textContent = path;
      const copy = document.createElement('button');
      copy.textContent = 'copy path';
      copy.addEventListener('click', () => {
        void navigator.clipboard?.writeText(path);
      });
      const close = document.createElement('button');
      close.textContent = 'close';
      close.addEventListener('click', () => overlay.remove());
      box.append(code, copy, close);
      overlay.appendChild(box);
      document.body.appendChild(overlay);
    } catch (error) {
      fail(error);
    }
  }

  void verifyStations();
  return {
    el,
    destroy(): void {
      treeView?.destroy();
      el.remove();
    },
  };
}
