// Preview dialog: slice slider plus series navigation for multi-series studies.

import type { SeriesManifest } from '../types';
import { showSeriesSwitch } from '../state';

export interface PreviewDialogOptions {
  manifests: SeriesManifest[];
  imageUrl: (seriesUid: string, name: string) => string;
  onClose?: () => void;
}

export interface PreviewDialogInstance {
  el: HTMLElement;
  image: HTMLImageElement;
  slider: HTMLInputElement;
  seriesLabel: HTMLElement | null;
  setSeries(index: number): void;
  setSlice(position: number): void; // 1-based
  currentSeries(): SeriesManifest;
  destroy(): void;
}

export function createPreviewDialog(options: PreviewDialogOptions): PreviewDialogInstance {
  if (options.manifests.length === 0) {
    throw new Error('preview dialog needs at least one series manifest');
  }
  let seriesIndex = 0;
  let slice = 1;

  const el = document.createElement('div');
  el.className = 'preview-overlay';
  const dialog = document.createElement('div');
  dialog.className = 'preview-dialog';
  el.appendChild(dialog);

  const closeButton = document.createElement('button');
  closeButton.className = 'close';
  closeButton.textContent = '×';
  closeButton.addEventListener('click', () => {
    options.onClose?.();
    instance.destroy();
  });
  dialog.appendChild(closeButton);

  const frame = document.createElement('div');
  frame.className = 'preview-frame';
  const image = document.createElement('img');
  image.className = 'preview-image';
  image.alt = 'preview';
  frame.appendChild(image);
  dialog.appendChild(frame);

  const controls = document.createElement('div');
  controls.className = 'preview-controls';
  dialog.appendChild(controls);

  const slider = document.createElement('input');
  slider.type = 'range';
  slider.min = '1';
  slider.step = '1';
  const sliceLabel = document.createElement('span');
  sliceLabel.className = 'slice-label';
  controls.append(slider, sliceLabel);

  let seriesLabel: HTMLElement | null = null;
  let prevButton: HTMLButtonElement | null = null;
  let nextButton: HTMLButtonElement | null = null;
  if (showSeriesSwitch(options.manifests.length)) {
    const nav = document.createElement('div');
    nav.className = 'series-nav';
    prevButton = document.createElement('button');
    prevButton.dataset.action = 'prev-series';
    prevButton.textContent = '← series';
    nextButton = document.createElement('button');
    nextButton.dataset.action = 'next-series';
    nextButton.textContent = 'series →';
    seriesLabel = document.createElement('span');
    seriesLabel.className = 'series-label';
    nav.append(prevButton, seriesLabel, nextButton);
    dialog.appendChild(nav);
    prevButton.addEventListener('click', () => instance.setSeries(seriesIndex - 1));
    nextButton.addEventListener('click', () => instance.setSeries(seriesIndex + 1));
  }

  function update(): void {
    const manifest = options.manifests[seriesIndex];
    const entry = manifest.entries[slice - 1];
    const name = entry.files.viewer ?? entry.files.lossless ?? '';
    image.src = options.imageUrl(manifest.series_uid, name);
    slider.max = String(manifest.entries.length);
    slider.value = String(slice);
    sliceLabel.textContent = `${slice} / ${manifest.entries.length}`;
    if (seriesLabel) {
      seriesLabel.textContent =
        `series ${seriesIndex + 1} / ${options.manifests.length}`
        + ` (${manifest.series_uid})`;
    }
    if (prevButton) prevButton.disabled = seriesIndex === 0;
    if (nextButton) nextButton.disabled = seriesIndex === options.manifests.length - 1;
  }

  slider.addEventListener('input', () => {
    slice = Number(slider.value);
    update();
  });

  const instance: PreviewDialogInstance = {
    el,
    image,
    slider,
    seriesLabel,
    setSeries(index: number): void {
      if (index < 0 || index >= options.manifests.length) return;
      seriesIndex = index;
      slice = 1;
      update();
    },
    setSlice(position: number): void {
      const manifest = options.manifests[seriesIndex];
      if (position < 1 || position > manifest.entries.length) return;
      slice = position;
      update();
    },
    currentSeries(): SeriesManifest {
      return options.manifests[seriesIndex];
    },
    destroy(): void {
      el.remove();
    },
  };
  update();
  return instance;
}
