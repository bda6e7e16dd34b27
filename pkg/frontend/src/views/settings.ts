// Settings: Connections table (default page) and Preferences form.

import { ApiError, GatewayClient } from '../api';
import type { Preferences, Station, StationStatus } from '../types';

export interface SettingsDeps {
  client: GatewayClient;
  onAuthExpired: () => void;
}

export function createSettingsView(deps: SettingsDeps): { el: HTMLElement; destroy(): void } {
  const { client } = deps;
  const el = document.createElement('section');
  el.className = 'settings-view';

  const tabs = document.createElement('nav');
  tabs.className = 'tabs';
  const connectionsTab = document.createElement('button');
  connectionsTab.textContent = 'Connections';
  const preferencesTab = document.createElement('button');
  preferencesTab.textContent = 'Preferences';
  tabs.append(connectionsTab, preferencesTab);
  el.appendChild(tabs);

  const connectionsPage = document.createElement('div');
  connectionsPage.className = 'connections-page';
  const preferencesPage = document.createElement('div');
  preferencesPage.className = 'preferences-page hidden';
  el.append(connectionsPage, preferencesPage);

  connectionsTab.addEventListener('click', () => {
    connectionsPage.classList.remove('hidden');
    preferencesPage.classList.add('hidden');
  });
  preferencesTab.addEventListener('click', () => {
    preferencesPage.classList.remove('hidden');
    connectionsPage.classList.add('hidden');
  });

  function authGuard(error: unknown): boolean {
    if (error instanceof ApiError && error.status === 401) {
      deps.onAuthExpired();
      return true;
    }
    return false;
  }

  // -- connections

  const table = document.createElement('table');
  table.className = 'stations';
  connectionsPage.appendChild(table);
  const statusByName = new Map<string, StationStatus>();

  async function renderStations(): Promise<void> {
    let stations: Station[];
    try {
      stations = (await client.stations()).stations;
    } catch (error) {
      if (!authGuard(error)) throw error;
      return;
    }
    table.innerHTML = '';
    const head = document.createElement('tr');
    for (const title of ['AE Title', 'IP address', 'Port', 'Name', 'Status', '']) {
      const th = document.createElement('th');
      th.textContent = title;
      head.appendChild(th);
    }
    table.appendChild(head);
    for (const station of stations) {
      const row = document.createElement('tr');
      row.dataset.name = station.name;
      for (const value of [station.ae_title, station.host,
                           String(station.port), station.name]) {
        const cell = document.createElement('td');
        cell.textContent = value;
        row.appendChild(cell);
      }
      const statusCell = document.createElement('td');
      statusCell.className = 'status-cell';
      const status = statusByName.get(station.name);
      if (status) {
        statusCell.textContent = status.reachable
          ? `reachable${status.latency_ms ? ` (${status.latency_ms} ms)` : ''}`
          : 'unreachable';
        statusCell.classList.toggle('reachable', status.reachable);
      }
      row.appendChild(statusCell);

      const actionsCell = document.createElement('td');
      const verifyButton = document.createElement('button');
      verifyButton.textContent = 'Verify';
      verifyButton.addEventListener('click', () => {
        void client.verifyStations(station.name).then((result) => {
          for (const s of result.statuses) statusByName.set(s.station.name, s);
          void renderStations();
        }).catch((error) => { if (!authGuard(error)) throw error; });
      });
      const removeButton = document.createElement('button');
      removeButton.textContent = 'Remove';
      removeButton.addEventListener('click', () => {
        void client.removeStation(station.name).then(() => renderStations())
          .catch((error) => { if (!authGuard(error)) throw error; });
      });
      actionsCell.append(verifyButton, removeButton);
      row.appendChild(actionsCell);
      table.appendChild(row);
    }
  }

  const addForm = document.createElement('form');
  addForm.className = 'add-station';
  const fields: Record<string, HTMLInputElement> = {};
  for (const [name, placeholder] of [
    ['name', 'descriptive name'], ['ae_title', 'AE title'],
    ['host', 'IP address'], ['port', 'port'],
  ] as const) {
    const input = document.createElement('input');
    input.name = name;
    input.placeholder = placeholder;
    fields[name] = input;
    addForm.appendChild(input);
  }
  const addButton = document.createElement('button');
  addButton.type = 'submit';
  addButton.textContent = 'Add station';
  const addError = document.createElement('span');
  addError.className = 'inline-error';
  addForm.append(addButton, addError);
  connectionsPage.appendChild(addForm);

  addForm.addEventListener('submit', (event) => {
    event.preventDefault();
    addError.textContent = '';
    const port = Number(fields.port.value);
    if (!Number.isInteger(port) || port < 1 || port > 65535) {
      addError.textContent = 'port must be an integer in 1..65535';
      return;
    }
    if (!fields.name.value.trim() || !fields.ae_title.value.trim()
        || !fields.host.value.trim()) {
      addError.textContent = 'all fields are required';
      return;
    }
    void client.addStation({
      name: fields.name.value.trim(),
      ae_title: fields.ae_title.value.trim(),
      host: fields.host.value.trim(),
      port,
    }).then(() => {
      addForm.reset();
      return renderStations();
    }).catch((error) => {
      if (!authGuard(error)) {
        addError.textContent = error instanceof Error ? error.message : String(error);
      }
    });
  });

  // -- preferences

  const prefsForm = document.createElement('form');
  prefsForm.className = 'preferences';
  const exactLabel = document.createElement('label');
  const exactInput = document.createElement('input');
  exactInput.type = 'checkbox';
  exactLabel.append(exactInput, document.createTextNode(' exact matches only'));
  const connectInput = document.createElement('input');
  connectInput.type = 'number';
  connectInput.min = '1';
  const dimseInput = document.createElement('input');
  dimseInput.type = 'number';
  dimseInput.min = '1';
  const rootInput = document.createElement('input');
  rootInput.placeholder = 'save path';
  const saveButton = document.createElement('button');
  saveButton.type = 'submit';
  saveButton.textContent = 'Save preferences';
  const prefsError = document.createElement('span');
  prefsError.className = 'inline-error';

  const wrap = (text: string, input: HTMLElement) => {
    const label = document.createElement('label');
    label.append(document.createTextNode(text), input);
    return label;
  };
  prefsForm.append(exactLabel,
                   wrap('connect timeout (s)', connectInput),
                   wrap('DIMSE timeout (s)', dimseInput),
                   wrap('save path', rootInput),
                   saveButton, prefsError);
  preferencesPage.appendChild(prefsForm);

  async function loadPreferences(): Promise<void> {
    try {
      const preferences = await client.getPreferences();
      exactInput.checked = preferences.exact_match;
      connectInput.value = String(preferences.connect_timeout_s);
      dimseInput.value = String(preferences.dimse_timeout_s);
      rootInput.value = preferences.output_root;
    } catch (error) {
      if (!authGuard(error)) throw error;
    }
  }

  prefsForm.addEventListener('submit', (event) => {
    event.preventDefault();
    prefsError.textContent = '';
    const connect = Number(connectInput.value);
    const dimse = Number(dimseInput.value);
    if (!Number.isInteger(connect) || connect < 1
        || !Number.isInteger(dimse) || dimse < 1) {
      prefsError.textContent = 'timeouts must be positive integers';
      return;
    }
    if (!rootInput.value.trim()) {
      prefsError.textContent = 'save path is required';
      return;
    }
    const body: Preferences = {
      exact_match: exactInput.checked,
      connect_timeout_s: connect,
      dimse_timeout_s: dimse,
      output_root: rootInput.value.trim(),
    };
    void client.putPreferences(body).then(() => {
      prefsError.textContent = 'saved';
    }).catch((error) => {
      if (!authGuard(error)) {
        prefsError.textContent = error instanceof Error ? error.message : String(error);
      }
    });
  });

  void renderStations();
  void loadPreferences();
  return { el, destroy: () => el.remove() };
}
