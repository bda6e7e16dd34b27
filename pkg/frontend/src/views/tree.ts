// Results tree: study rows with series children and an Actions column.

import type { SeriesDoc, StudyDoc, TreeDoc } from '../types';
import { ActionStateStore, nodeKey } from '../state';

export interface TreeViewOptions {
  tree: TreeDoc;
  store: ActionStateStore;
  onRetrieve: (study: StudyDoc, series?: SeriesDoc) => void;
  onPreview: (study: StudyDoc, series?: SeriesDoc) => void;
  onOpen: (study: StudyDoc, series?: SeriesDoc) => void;
}

export interface TreeViewInstance {
  el: HTMLElement;
  refresh(): void;
  destroy(): void;
}

function actionsCell(
  options: TreeViewOptions,
  study: StudyDoc,
  series?: SeriesDoc,
): HTMLTableCellElement {
  const cell = document.createElement('td');
  cell.className = 'actions';
  const key = nodeKey(study.station.name, study.study_instance_uid,
                      series?.series_instance_uid);
  const state = options.store.get(key);

  const mk = (label: string, action: string, enabled: boolean, fn: () => void) => {
    const button = document.createElement('button');
    button.textContent = label;
    button.dataset.action = action;
    button.disabled = !enabled;
    button.addEventListener('click', fn);
    cell.appendChild(button);
  };
  mk('Retrieve', 'retrieve', state.retrieve_enabled,
     () => options.onRetrieve(study, series));
  mk('Preview', 'preview', state.preview_enabled,
     () => options.onPreview(study, series));
  mk('Open', 'open', state.open_enabled, () => options.onOpen(study, series));

  if (state.failed_mark) {
    const mark = document.createElement('span');
    mark.className = 'cross-mark';
    mark.title = 'last retrieval failed';
    mark.textContent = '✖';
    cell.appendChild(mark);
  }
  return cell;
}

function cells(values: string[]): HTMLTableCellElement[] {
  return values.map((value) => {
    const cell = document.createElement('td');
    cell.textContent = value;
    return cell;
  });
}

export function createTreeView(options: TreeViewOptions): TreeViewInstance {
  const el = document.createElement('div');
  el.className = 'tree-view';
  const expanded = new Set<string>(
    options.tree.studies.map((s) => s.study_instance_uid),
  );

  function render(): void {
    el.innerHTML = '';
    if (options.tree.studies.length === 0) {
      const empty = document.createElement('p');
      empty.className = 'empty-state';
      empty.textContent = 'no results';
      el.appendChild(empty);
      return;
    }
    const table = document.createElement('table');
    table.className = 'tree';
    const head = document.createElement('tr');
    for (const title of ['', 'Patient', 'Date', 'Description', 'Station', 'Actions']) {
      const th = document.createElement('th');
      th.textContent = title;
      head.appendChild(th);
    }
    table.appendChild(head);

    for (const study of options.tree.studies) {
      const row = document.createElement('tr');
      row.className = 'study-row';
      row.dataset.study = study.study_instance_uid;
      const toggle = document.createElement('td');
      const toggleButton = document.createElement('button');
      toggleButton.className = 'toggle';
      toggleButton.textContent = expanded.has(study.study_instance_uid) ? '▾' : '▸';
      toggleButton.addEventListener('click', () => {
        if (!expanded.delete(study.study_instance_uid)) {
          expanded.add(study.study_instance_uid);
        }
        render();
      });
      toggle.appendChild(toggleButton);
      row.appendChild(toggle);
      const label = `${study.study_instance_uid} — ${study.patient_name}`
        + (study.patient_id ? ` (${study.patient_id})` : '');
      row.append(...cells([label, study.study_date, study.study_description,
                           study.station.name]));
      row.appendChild(actionsCell(options, study));
      table.appendChild(row);

      if (!expanded.has(study.study_instance_uid)) continue;
      for (const series of study.series) {
        const child = document.createElement('tr');
        child.className = 'series-row';
        child.dataset.study = study.study_instance_uid;
        child.dataset.series = series.series_instance_uid;
        const pad = document.createElement('td');
        child.appendChild(pad);
        const count = series.instance_count === null
          ? '' : ` · ${series.instance_count} images`;
        child.append(...cells([
          `${series.series_instance_uid} — ${series.modality}`
            + (series.series_number ? ` #${series.series_number}` : ''),
          '', `${series.series_description}${count}`, '']));
        child.appendChild(actionsCell(options, study, series));
        table.appendChild(child);
      }
    }
    el.appendChild(table);

    for (const error of options.tree.errors) {
      const line = document.createElement('p');
      line.className = 'station-error';
      line.textContent = `${error.station}: ${error.message}`;
      el.appendChild(line);
    }
  }

  const unsubscribe = options.store.subscribe(render);
  render();
  return {
    el,
    refresh: render,
    destroy(): void {
      unsubscribe();
      el.remove();
    },
  };
}
