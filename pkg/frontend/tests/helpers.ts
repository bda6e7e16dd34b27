// Shared fixtures for component tests: a canned tree and a scriptable client.

import { GatewayClient } from '../src/api';
import type { JobDoc, SeriesDoc, StudyDoc, TreeDoc } from '../src/types';

export function idle() {
  return {
    retrieve_enabled: true,
    preview_enabled: false,
    open_enabled: false,
    failed_mark: false,
  };
}

export function fixtureSeries(uid: string, modality: string, count: number): SeriesDoc {
  return {
    series_instance_uid: uid,
    modality,
    series_number: '1',
    series_description: `${modality} series`,
    instance_count: count,
    actions: idle(),
  };
}

export function fixtureStudy(): StudyDoc {
  return {
    station: { name: 'MockA', ae_title: 'MOCKPACS', host: '127.0.0.1', port: 11112 },
    study_instance_uid: '1.2.3.1',
    study_date: '20240102',
    study_description: 'CHEST ROUTINE',
    patient_name: 'DOE^JOHN',
    patient_id: 'P001',
    accession_number: 'ACC001',
    custom_values: {},
    series: [fixtureSeries('1.2.3.1.1', 'CT', 3), fixtureSeries('1.2.3.1.2', 'MR', 2)],
    actions: idle(),
  };
}

export function fixtureTree(): TreeDoc {
  return { studies: [fixtureStudy()], errors: [] };
}

export function jobDoc(state: JobDoc['state'], completed: number,
                       expected: number, success = state === 'completed'): JobDoc {
  return {
    id: 'job-1',
    scope: 'study',
    station: 'MockA',
    study_uid: '1.2.3.1',
    series_uid: null,
    state,
    progress: { completed, expected },
    report: state === 'completed' || state === 'failed' ? {
      scope: 'study',
      study_uid: '1.2.3.1',
      series_uid: null,
      expected,
      completed,
      failed: expected - completed,
      success,
      output_root: '/data/retrieved',
      per_series: [
        { series_uid: '1.2.3.1.1', files_written: Math.min(completed, 3) },
        { series_uid: '1.2.3.1.2', files_written: Math.max(completed - 3, 0) },
      ],
      error: null,
    } : null,
  };
}

/** GatewayClient whose methods are replaced by scripted responses. */
export function scriptedClient(overrides: Partial<GatewayClient>): GatewayClient {
  const client = new GatewayClient('http://gateway.test', async () => {
    throw new Error('unscripted fetch');
  });
  client.token = 'test-token';
  return Object.assign(client, overrides);
}

export function flush(): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, 0));
}
